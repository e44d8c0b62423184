#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "horo/rng.hpp"
#include "horo/word.hpp"

namespace horo {

// Visits every non-backtracking letter sequence of length exactly n, in
// lexicographic order on letter codes, optionally skipping sequences whose
// final letter equals `last_excluded`. The buffer passed to the visitor is
// reused between calls.
template <class Visitor>
void for_each_nonbacktracking(int rank, int n, std::optional<Letter> last_excluded,
                              Visitor&& visit) {
  if (n < 0) throw std::invalid_argument("negative word length");
  std::vector<Letter> buf(static_cast<std::size_t>(n));
  const int alphabet = 2 * rank;
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      visit(std::span<const Letter>(buf.data(), buf.size()));
      return;
    }
    for (int c = 0; c < alphabet; ++c) {
      Letter l = static_cast<Letter>(c);
      if (pos > 0 && l == inverse_letter(buf[pos - 1])) continue;
      if (pos == n - 1 && last_excluded && l == *last_excluded) continue;
      buf[pos] = l;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
}

// Materialized enumeration of reduced words of length exactly n.
inline std::vector<ReducedWord> enumerate_nonbacktracking(
    int rank, int n, std::optional<Letter> last_excluded = std::nullopt) {
  std::vector<ReducedWord> out;
  for_each_nonbacktracking(rank, n, last_excluded, [&](std::span<const Letter> w) {
    out.emplace_back(rank, std::vector<Letter>(w.begin(), w.end()));
  });
  return out;
}

// All reduced words with |g| <= max_len, identity first, then by length.
inline std::vector<ReducedWord> enumerate_ball(int rank, int max_len) {
  std::vector<ReducedWord> out;
  out.push_back(ReducedWord::identity(rank));
  for (int n = 1; n <= max_len; ++n)
    for (auto& w : enumerate_nonbacktracking(rank, n)) out.push_back(std::move(w));
  return out;
}

// #{g : |g| = n} = 2r(2r-1)^(n-1) for n >= 1.
inline std::uint64_t sphere_size(int rank, int n) {
  if (n == 0) return 1;
  std::uint64_t c = static_cast<std::uint64_t>(2 * rank);
  for (int i = 1; i < n; ++i) c *= static_cast<std::uint64_t>(2 * rank - 1);
  return c;
}

// Uniform reduced word of the given length.
inline ReducedWord random_reduced_word(int rank, int length, Stream& s) {
  std::vector<Letter> ls;
  ls.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    if (ls.empty()) {
      ls.push_back(static_cast<Letter>(s.next_below(static_cast<std::uint64_t>(2 * rank))));
    } else {
      Letter banned = inverse_letter(ls.back());
      auto k = s.next_below(static_cast<std::uint64_t>(2 * rank - 1));
      ls.push_back(static_cast<Letter>(k >= banned ? k + 1 : k));
    }
  }
  return ReducedWord(rank, ls);
}

}  // namespace horo
