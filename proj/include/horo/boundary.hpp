#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/rational.hpp"
#include "horo/rng.hpp"
#include "horo/word.hpp"

namespace horo {

// A boundary point of the free group: an infinite non-backtracking letter
// sequence, materialized to finite depth. The unmaterialized tail is lawful
// and deterministic: the letter at (1-based) position p is produced from
// keyed_draw(seed, offset + p), first letter uniform over 2r, every later
// letter uniform over the 2r-1 admissible continuations. The offset keeps
// draw positions aligned when the group action shifts the sequence, so an
// image point extends to exactly the letters its preimage would have
// produced.
class BoundaryPoint {
public:
  BoundaryPoint(int rank, std::uint64_t tail_seed)
      : rank_(rank), seed_(tail_seed), offset_(0) {
    if (rank < 2) throw std::invalid_argument("boundary needs rank >= 2");
  }

  BoundaryPoint(int rank, std::vector<Letter> prefix, std::uint64_t tail_seed,
                std::int64_t offset = 0)
      : rank_(rank), letters_(std::move(prefix)), seed_(tail_seed), offset_(offset) {
    if (rank < 2) throw std::invalid_argument("boundary needs rank >= 2");
    check_nonbacktracking(letters_);
  }

  int rank() const { return rank_; }
  std::uint64_t tail_seed() const { return seed_; }
  std::int64_t offset() const { return offset_; }
  int depth() const { return static_cast<int>(letters_.size()); }
  const std::vector<Letter>& letters() const { return letters_; }

  // Letter at 1-based position p, materializing as needed.
  Letter at(int p) {
    extend_to(p);
    return letters_[static_cast<std::size_t>(p - 1)];
  }

  void extend_to(int depth) {
    while (static_cast<int>(letters_.size()) < depth) {
      std::int64_t pos = offset_ + static_cast<std::int64_t>(letters_.size()) + 1;
      std::uint64_t u = keyed_draw(seed_, static_cast<std::uint64_t>(pos));
      if (letters_.empty()) {
        letters_.push_back(static_cast<Letter>(bounded(u, 2ull * rank_)));
      } else {
        Letter banned = inverse_letter(letters_.back());
        auto idx = bounded(u, 2ull * rank_ - 1);
        Letter l = static_cast<Letter>(idx >= banned ? idx + 1 : idx);
        letters_.push_back(l);
      }
    }
  }

  // Overwrite the first prefix.size() letters in place, keeping the tail.
  // The result must still be non-backtracking, including at the junction.
  void set_prefix(std::span<const Letter> prefix) {
    if (prefix.size() > letters_.size())
      throw std::invalid_argument("set_prefix: prefix longer than materialized depth");
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (prefix[i] >= static_cast<Letter>(2 * rank_))
        throw std::invalid_argument("set_prefix: letter out of range");
      if (i + 1 < prefix.size() && prefix[i + 1] == inverse_letter(prefix[i]))
        throw std::invalid_argument("set_prefix: backtracking prefix");
    }
    if (!prefix.empty() && prefix.size() < letters_.size() &&
        letters_[prefix.size()] == inverse_letter(prefix[prefix.size() - 1]))
      throw std::invalid_argument("set_prefix: backtracking junction");
    std::copy(prefix.begin(), prefix.end(), letters_.begin());
  }

  // Letter-token serialization of the materialized prefix.
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i) out += '.';
      out += letter_token(letters_[i]);
    }
    return out.empty() ? "e" : out;
  }

  // Canonical comparison key: the first `depth` letters as raw bytes.
  std::string key(int depth) {
    extend_to(depth);
    return std::string(reinterpret_cast<const char*>(letters_.data()),
                       static_cast<std::size_t>(depth));
  }

private:
  static void check_nonbacktracking(const std::vector<Letter>& ls) {
    for (std::size_t i = 1; i < ls.size(); ++i)
      if (ls[i] == inverse_letter(ls[i - 1]))
        throw std::invalid_argument("backtracking letter sequence");
  }

  int rank_;
  std::vector<Letter> letters_;
  std::uint64_t seed_;
  std::int64_t offset_;
};

// ---------------------------------------------------------------------------
// Cylinders and the Markov measure.

// The set of boundary points starting with a fixed non-backtracking prefix.
struct Cylinder {
  int rank;
  std::vector<Letter> prefix;

  Cylinder(int r, std::vector<Letter> p) : rank(r), prefix(std::move(p)) {
    for (std::size_t i = 1; i < prefix.size(); ++i)
      if (prefix[i] == inverse_letter(prefix[i - 1]))
        throw std::invalid_argument("cylinder prefix backtracks");
  }

  int depth() const { return static_cast<int>(prefix.size()); }

  static Cylinder parse(std::string_view text, int rank) {
    ReducedWord w = ReducedWord::parse(text, rank);
    return Cylinder(rank, w.letters());
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (i) out += '.';
      out += letter_token(prefix[i]);
    }
    if (out.empty()) out = "e";
    return out + "@" + std::to_string(rank);
  }
};

// nu(cylinder of depth n) = (2r)^-1 (2r-1)^-(n-1); the whole space for n = 0.
inline Rational cylinder_measure(const Cylinder& c) {
  int n = c.depth();
  if (n == 0) return Rational(1);
  return Rational(1, 2 * c.rank) * Rational::pow(2 * c.rank - 1, -(n - 1));
}

inline bool cylinder_contains(const Cylinder& c, BoundaryPoint& xi) {
  for (int i = 0; i < c.depth(); ++i)
    if (xi.at(i + 1) != c.prefix[static_cast<std::size_t>(i)]) return false;
  return true;
}

// Draws a boundary point distributed according to the Markov measure,
// materialized to the given depth; deterministic in the seed.
inline BoundaryPoint sample_boundary(int rank, std::uint64_t seed, int depth) {
  BoundaryPoint xi(rank, seed);
  xi.extend_to(depth);
  return xi;
}

// ---------------------------------------------------------------------------
// The boundary action.

struct ActResult {
  BoundaryPoint image;
  int cancelled;    // letters of g cancelled against the head of xi
  int rn_exponent;  // 2k - |g|; the derivative of nu under g at xi is (2r-1)^this
};

// g acting on xi by concatenate-and-cancel. The image shares xi's tail
// extender; its draw offset shifts by the net head displacement so later
// extensions stay consistent with xi's.
inline ActResult act(const ReducedWord& g, BoundaryPoint& xi) {
  if (g.rank() != xi.rank()) throw std::invalid_argument("act: rank mismatch");
  const int n = g.length();
  xi.extend_to(n + 1);
  const auto& gl = g.letters();
  int k = 0;
  while (k < n && gl[static_cast<std::size_t>(n - 1 - k)] == inverse_letter(xi.at(k + 1))) ++k;
  std::vector<Letter> out;
  out.reserve(static_cast<std::size_t>(n - k) + xi.letters().size() - static_cast<std::size_t>(k));
  for (int i = 0; i < n - k; ++i) out.push_back(gl[static_cast<std::size_t>(i)]);
  for (int i = k + 1; i <= xi.depth(); ++i) out.push_back(xi.at(i));
  int rn_exp = 2 * k - n;
  BoundaryPoint image(xi.rank(), std::move(out), xi.tail_seed(), xi.offset() + rn_exp);
  return ActResult{std::move(image), k, rn_exp};
}

// ---------------------------------------------------------------------------
// Horospheres.

// Busemann level of g relative to xi: |g| - 2 * (longest common prefix of
// g's reduced word with xi). Level 0 is the horosphere through the identity.
inline int busemann_level(const ReducedWord& g, BoundaryPoint& xi) {
  if (g.rank() != xi.rank()) throw std::invalid_argument("busemann: rank mismatch");
  xi.extend_to(g.length() + 1);
  int common = 0;
  while (common < g.length() && g.letters()[static_cast<std::size_t>(common)] == xi.at(common + 1))
    ++common;
  return g.length() - 2 * common;
}

inline bool horosphere_contains(const ReducedWord& g, BoundaryPoint& xi) {
  return busemann_level(g, xi) == 0;
}

}  // namespace horo
