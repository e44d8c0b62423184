#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/rational.hpp"
#include "horo/rng.hpp"

namespace horo {

// A finite weighted model of the averaging setup: points 0..size-1 with
// strictly positive rational weights, an ergodic-class partition, and for
// each level n a member list F_n(p) per point. Member lists are sorted.
struct FiniteModel {
  std::vector<Rational> weight;
  std::vector<int> cls;
  // members[l][p] holds F_{l+1}(p).
  std::vector<std::vector<std::vector<int>>> members;

  int size() const { return static_cast<int>(weight.size()); }
  int levels() const { return static_cast<int>(members.size()); }

  // Lists are eventually constant in n by construction, so indices past the
  // last stored level clamp to it. Level 0 and below are handled by callers
  // (the singleton {p}).
  const std::vector<int>& member_list(int p, int n) const {
    if (n < 1) throw std::invalid_argument("member_list: level must be >= 1");
    if (levels() == 0) throw std::invalid_argument("member_list: model has no levels");
    int l = std::min(n, levels()) - 1;
    return members[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)];
  }

  std::vector<int> class_members(int c) const {
    std::vector<int> out;
    for (int p = 0; p < size(); ++p)
      if (cls[static_cast<std::size_t>(p)] == c) out.push_back(p);
    return out;
  }

  int class_count() const {
    int m = 0;
    for (int c : cls) m = std::max(m, c + 1);
    return m;
  }

  int cls_of(int p) const { return cls[static_cast<std::size_t>(p)]; }

  void validate() const {
    if (weight.empty()) throw std::invalid_argument("finite model: empty");
    if (cls.size() != weight.size()) throw std::invalid_argument("finite model: class size mismatch");
    for (const auto& w : weight)
      if (!(w > Rational(0))) throw std::invalid_argument("finite model: weights must be positive");
    for (const auto& level : members) {
      if (level.size() != weight.size())
        throw std::invalid_argument("finite model: member table size mismatch");
      for (const auto& list : level) {
        if (list.empty()) throw std::invalid_argument("finite model: empty member list");
        for (std::size_t i = 0; i < list.size(); ++i) {
          if (list[i] < 0 || list[i] >= size())
            throw std::invalid_argument("finite model: member out of range");
          if (i + 1 < list.size() && list[i] >= list[i + 1])
            throw std::invalid_argument("finite model: member list not sorted");
        }
      }
    }
  }
};

// Subset-sequence adapter; D(b', b) = w(b') / w(b).
struct FiniteModelSeq {
  using point_type = int;
  using weight_type = Rational;

  const FiniteModel* model = nullptr;

  template <class Sink>
  void for_each_member(int& b, int n, Sink&& sink) const {
    if (n < 1) {
      int self = b;
      sink(self, Rational(1));
      return;
    }
    for (int p : model->member_list(b, n)) {
      int m = p;
      sink(m, model->weight[static_cast<std::size_t>(p)] / model->weight[static_cast<std::size_t>(b)]);
    }
  }

  std::string label(int& b) const { return std::to_string(b); }
};

// The classwise average (sum of u w over the class) / (sum of v w over the
// class): the limit every ratio average in that class reaches once member
// lists hit the whole class.
inline Rational class_ratio(const FiniteModel& m, const std::vector<Rational>& u,
                            const std::vector<Rational>& v, int c) {
  Rational num(0), den(0);
  for (int p = 0; p < m.size(); ++p) {
    if (m.cls[static_cast<std::size_t>(p)] != c) continue;
    num = num + u[static_cast<std::size_t>(p)] * m.weight[static_cast<std::size_t>(p)];
    den = den + v[static_cast<std::size_t>(p)] * m.weight[static_cast<std::size_t>(p)];
  }
  if (den == Rational(0)) throw std::invalid_argument("class_ratio: zero denominator mass");
  return num / den;
}

// Random model whose member lists satisfy the averaging hypotheses by
// construction: within each level the lists partition every class, the
// family over all levels is nested (lists only ever merge as n grows), each
// point stays in its own list, and from a per-class threshold level on the
// list is the whole class. Weights use a fixed denominator of 12 so that
// downstream exact arithmetic stays inside 64-bit numerators.
inline FiniteModel random_finite_model(std::uint64_t seed, int max_size = 64, int levels = 8) {
  Stream s(seed);
  int size = 2 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(max_size - 1)));
  FiniteModel m;
  m.weight.reserve(static_cast<std::size_t>(size));
  for (int p = 0; p < size; ++p)
    m.weight.emplace_back(1 + static_cast<std::int64_t>(s.next_below(24)), 12);

  int want_classes = 1 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(std::min(4, size))));
  m.cls.assign(static_cast<std::size_t>(size), 0);
  for (int p = 0; p < size; ++p)
    m.cls[static_cast<std::size_t>(p)] = static_cast<int>(s.next_below(static_cast<std::uint64_t>(want_classes)));
  // Compact class ids so every id is inhabited.
  {
    std::vector<int> remap(static_cast<std::size_t>(want_classes), -1);
    int next = 0;
    for (auto& c : m.cls) {
      if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
      c = remap[static_cast<std::size_t>(c)];
    }
  }

  m.members.assign(static_cast<std::size_t>(levels),
                   std::vector<std::vector<int>>(static_cast<std::size_t>(size)));
  for (int c = 0; c < m.class_count(); ++c) {
    std::vector<int> pts = m.class_members(c);
    // Threshold level at which the blocks collapse to the full class.
    int collapse = 1 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(levels)));

    // Level-1 blocks: shuffle, then cut into runs.
    for (std::size_t i = pts.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(s.next_below(i));
      std::swap(pts[i - 1], pts[j]);
    }
    std::vector<std::vector<int>> blocks;
    blocks.push_back({pts[0]});
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (s.next_below(2) == 0) blocks.push_back({});
      blocks.back().push_back(pts[i]);
    }

    for (int level = 1; level <= levels; ++level) {
      if (level >= collapse && blocks.size() > 1) {
        std::vector<int> all;
        for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
        blocks.clear();
        blocks.push_back(std::move(all));
      } else if (level > 1) {
        // Merge a random subset of adjacent block pairs; nesting follows
        // because blocks only ever merge.
        std::vector<std::vector<int>> merged;
        for (auto& b : blocks) {
          if (!merged.empty() && s.next_below(2) == 0) {
            merged.back().insert(merged.back().end(), b.begin(), b.end());
          } else {
            merged.push_back(std::move(b));
          }
        }
        blocks = std::move(merged);
      }
      for (auto& b : blocks) {
        std::vector<int> sorted = b;
        std::sort(sorted.begin(), sorted.end());
        for (int p : b)
          m.members[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(p)] = sorted;
      }
    }
  }
  m.validate();
  return m;
}

// Random rational test vectors with the same bounded denominator.
inline std::vector<Rational> random_vector(Stream& s, int size, bool allow_zero) {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    std::int64_t lo = allow_zero ? 0 : 1;
    out.emplace_back(lo + static_cast<std::int64_t>(s.next_below(static_cast<std::uint64_t>(25 - lo))), 12);
  }
  return out;
}

// Cyclic-interval surrogate: F_n(k) = {k, .., k+n} mod N with unit weights
// and a single class. Its level families are overlapping windows, not
// partitions, which is exactly the structural failure the property report
// is meant to witness.
struct IntervalModel {
  int points = 0;

  int size() const { return points; }
  int levels() const { return points; }

  std::vector<int> member_list(int p, int n) const {
    if (n < 1) throw std::invalid_argument("member_list: level must be >= 1");
    n = std::min(n, points - 1);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) out.push_back((p + i) % points);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> class_members(int) const {
    std::vector<int> out(static_cast<std::size_t>(points));
    for (int p = 0; p < points; ++p) out[static_cast<std::size_t>(p)] = p;
    return out;
  }

  int class_count() const { return 1; }
  int cls_of(int) const { return 0; }
};

struct IntervalModelSeq {
  using point_type = int;
  using weight_type = int;

  const IntervalModel* model = nullptr;

  template <class Sink>
  void for_each_member(int& b, int n, Sink&& sink) const {
    if (n < 1) {
      int self = b;
      sink(self, 1);
      return;
    }
    for (int p : model->member_list(b, n)) {
      int m = p;
      sink(m, 1);
    }
  }

  std::string label(int& b) const { return std::to_string(b); }
};

}  // namespace horo
