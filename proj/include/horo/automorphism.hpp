#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/boundary.hpp"
#include "horo/enumerate.hpp"
#include "horo/rng.hpp"
#include "horo/word.hpp"

namespace horo {

// A tail-preserving bijection of the boundary that rewrites the first m
// letters through a prefix table and keeps everything after coordinate m.
// Invariants: the table is a bijection of the admissible (non-backtracking)
// m-prefixes and fixes the m-th letter, so images remain non-backtracking and
// every horoball of index > m is preserved as a set.
class PrefixBijection {
public:
  PrefixBijection(int rank, int order, std::map<std::string, std::vector<Letter>> table)
      : rank_(rank), order_(order), table_(std::move(table)) {
    validate();
    densify();
  }

  // The dense index points into table_ nodes, so copies re-index. Moves keep
  // the nodes and need no fix-up.
  PrefixBijection(const PrefixBijection& o) : rank_(o.rank_), order_(o.order_), table_(o.table_) {
    densify();
  }
  PrefixBijection& operator=(const PrefixBijection& o) {
    rank_ = o.rank_;
    order_ = o.order_;
    table_ = o.table_;
    densify();
    return *this;
  }
  PrefixBijection(PrefixBijection&&) = default;
  PrefixBijection& operator=(PrefixBijection&&) = default;

  // Identity on the first `order` letters.
  static PrefixBijection identity(int rank, int order) {
    std::map<std::string, std::vector<Letter>> table;
    for_each_nonbacktracking(rank, order, std::nullopt, [&](std::span<const Letter> p) {
      table.emplace(key_of(p), std::vector<Letter>(p.begin(), p.end()));
    });
    return PrefixBijection(rank, order, std::move(table));
  }

  // A random table: admissible m-prefixes are grouped by final letter and
  // each group is permuted uniformly, which keeps the final letter fixed.
  static PrefixBijection random(int rank, int order, std::uint64_t seed) {
    if (order < 1) throw std::invalid_argument("prefix bijection: order must be >= 1");
    std::vector<std::vector<std::vector<Letter>>> groups(static_cast<std::size_t>(2 * rank));
    for_each_nonbacktracking(rank, order, std::nullopt, [&](std::span<const Letter> p) {
      groups[p.back()].emplace_back(p.begin(), p.end());
    });
    Stream stream(seed);
    std::map<std::string, std::vector<Letter>> table;
    for (auto& group : groups) {
      std::vector<std::size_t> perm(group.size());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = group.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(stream.next_below(i));
        std::swap(perm[i - 1], perm[j]);
      }
      for (std::size_t i = 0; i < group.size(); ++i)
        table.emplace(key_of(group[i]), group[perm[i]]);
    }
    return PrefixBijection(rank, order, std::move(table));
  }

  int rank() const { return rank_; }
  int order() const { return order_; }

  // The rewritten first-m-letters block for xi; view into the table. Hot
  // path: a radix-coded dense lookup, no allocation.
  std::span<const Letter> image_prefix(BoundaryPoint& xi) const {
    if (xi.rank() != rank_) throw std::invalid_argument("prefix bijection: rank mismatch");
    xi.extend_to(order_);
    std::size_t code = 0;
    for (int i = 1; i <= order_; ++i)
      code = code * static_cast<std::size_t>(2 * rank_) + xi.at(i);
    const std::vector<Letter>* entry = dense_[code];
    if (!entry) throw std::logic_error("prefix bijection: missing table entry");
    return *entry;
  }

  // The image point: rewritten prefix, identical tail (same extender state).
  BoundaryPoint apply(BoundaryPoint& xi) const {
    auto mapped = image_prefix(xi);
    std::vector<Letter> out(mapped.begin(), mapped.end());
    for (int i = order_ + 1; i <= xi.depth(); ++i) out.push_back(xi.at(i));
    return BoundaryPoint(xi.rank(), std::move(out), xi.tail_seed(), xi.offset());
  }

private:
  static std::string key_of(std::span<const Letter> p) {
    return std::string(reinterpret_cast<const char*>(p.data()), p.size());
  }

  void validate() const {
    if (rank_ < 2) throw std::invalid_argument("prefix bijection: rank must be >= 2");
    if (order_ < 1) throw std::invalid_argument("prefix bijection: order must be >= 1");
    std::size_t expected = 0;
    std::map<std::string, int> image_count;
    bool ok = true;
    for_each_nonbacktracking(rank_, order_, std::nullopt, [&](std::span<const Letter> p) {
      ++expected;
      auto it = table_.find(key_of(p));
      if (it == table_.end()) {
        ok = false;
        return;
      }
      const auto& img = it->second;
      if (img.size() != static_cast<std::size_t>(order_) || img.back() != p.back()) ok = false;
      for (std::size_t i = 0; i < img.size(); ++i) {
        if (img[i] >= static_cast<Letter>(2 * rank_)) ok = false;
        if (i + 1 < img.size() && img[i + 1] == inverse_letter(img[i])) ok = false;
      }
      ++image_count[key_of(img)];
    });
    if (!ok || table_.size() != expected)
      throw std::invalid_argument("prefix bijection: table is not an admissible bijection");
    for (const auto& [k, c] : image_count)
      if (c != 1) throw std::invalid_argument("prefix bijection: table is not injective");
  }

  void densify() {
    std::size_t slots = 1;
    for (int i = 0; i < order_; ++i) slots *= static_cast<std::size_t>(2 * rank_);
    dense_.assign(slots, nullptr);
    for (const auto& [key, image] : table_) {
      std::size_t code = 0;
      for (char c : key)
        code = code * static_cast<std::size_t>(2 * rank_) + static_cast<unsigned char>(c);
      dense_[code] = &image;
    }
  }

  int rank_;
  int order_;
  std::map<std::string, std::vector<Letter>> table_;
  // Pointers into table_ values; std::map nodes are stable.
  std::vector<const std::vector<Letter>*> dense_;
};

}  // namespace horo
