#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/boundary.hpp"
#include "horo/rng.hpp"
#include "horo/word.hpp"

namespace horo {

// The step letters J(n) of the bi-infinite geodesic from `from` to `toward`,
// recorded for n in [lo, hi). Index 0 is pinned by the Busemann
// normalization: the vertex at position 0 lies on the level-0 horosphere of
// the forward endpoint.
struct StepWindow {
  int lo = 0;
  int hi = 0;
  std::vector<Letter> steps;

  Letter at(int n) const {
    if (n < lo || n >= hi) throw std::out_of_range("step window: index outside window");
    return steps[static_cast<std::size_t>(n - lo)];
  }

  bool operator==(const StepWindow&) const = default;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i) out += '.';
      out += letter_token(steps[i]);
    }
    return out.empty() ? "-" : out;
  }
};

// Smallest 1-based position where the two rays disagree. Throws if the rays
// coincide: provably when they share one tail extender, otherwise once no
// disagreement shows up within a generous horizon.
inline int first_disagreement(BoundaryPoint& from, BoundaryPoint& to, int need) {
  if (from.rank() != to.rank()) throw std::invalid_argument("geodesic: rank mismatch");
  int horizon = std::max({from.depth(), to.depth(), need}) + 64;
  for (int i = 1; i <= horizon; ++i)
    if (from.at(i) != to.at(i)) return i;
  throw std::invalid_argument("geodesic: endpoints coincide (degenerate pair)");
}

// J(n) over n in [-window, window). With j the first disagreement position,
// the vertex at position n is to_1..to_n when n >= j-1 and from_1..from_{2(j-1)-n}
// below that, so the step letter is to_{n+1} or the inverse of from_{2(j-1)-n}.
inline StepWindow geodesic_steps(BoundaryPoint& from, BoundaryPoint& toward, int window) {
  if (window < 0) throw std::invalid_argument("geodesic: negative window");
  int j = first_disagreement(from, toward, 2 * window + 2);
  StepWindow out{-window, window, {}};
  out.steps.reserve(static_cast<std::size_t>(2 * window));
  for (int n = -window; n < window; ++n) {
    if (n >= j - 1) {
      out.steps.push_back(toward.at(n + 1));
    } else {
      out.steps.push_back(inverse_letter(from.at(2 * (j - 1) - n)));
    }
  }
  return out;
}

// A uniform element of the level-0 horosphere of xi at word length 2l:
// the first l letters follow xi, then an l-letter non-backtracking block
// whose first letter avoids both xi_{l+1} (which would extend the common
// prefix) and the inverse of xi_l (which would cancel).
inline ReducedWord sample_horosphere_element(BoundaryPoint& xi, int l, Stream& stream) {
  if (l < 0) throw std::invalid_argument("horosphere sample: negative length");
  if (l == 0) return ReducedWord(xi.rank());
  const int r = xi.rank();
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(2 * l));
  for (int i = 1; i <= l; ++i) letters.push_back(xi.at(i));
  Letter ban_a = xi.at(l + 1);
  Letter ban_b = inverse_letter(xi.at(l));
  Letter lo = std::min(ban_a, ban_b);
  Letter hi = std::max(ban_a, ban_b);
  auto idx = stream.next_below(static_cast<std::uint64_t>(2 * r - 2));
  Letter first = static_cast<Letter>(idx);
  if (first >= lo) ++first;
  if (first >= hi) ++first;
  letters.push_back(first);
  for (int i = 1; i < l; ++i) {
    Letter banned = inverse_letter(letters.back());
    auto k = stream.next_below(static_cast<std::uint64_t>(2 * r - 1));
    Letter next = static_cast<Letter>(k >= banned ? k + 1 : k);
    letters.push_back(next);
  }
  ReducedWord g(xi.rank(), letters);
  if (g.length() != 2 * l) throw std::logic_error("horosphere sample: unexpected cancellation");
  return g;
}

}  // namespace horo
