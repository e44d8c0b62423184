#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "horo/boundary.hpp"
#include "horo/enumerate.hpp"
#include "horo/word.hpp"

namespace horo {

// The group element carrying eta to xi for a pair agreeing beyond coordinate
// N: the reduced form of (xi_1..xi_N)(eta_1..eta_N)^-1. The result does not
// depend on which valid N is used.
inline ReducedWord tail_cocycle(BoundaryPoint& xi, BoundaryPoint& eta, int agreement_depth) {
  if (xi.rank() != eta.rank()) throw std::invalid_argument("tail_cocycle: rank mismatch");
  if (agreement_depth < 0) throw std::invalid_argument("tail_cocycle: negative depth");
  if (xi.tail_seed() != eta.tail_seed() || xi.offset() != eta.offset())
    throw std::invalid_argument("tail_cocycle: points do not share a tail extender");
  int check_to = std::max(xi.depth(), eta.depth());
  check_to = std::max(check_to, agreement_depth + 1);
  for (int i = agreement_depth + 1; i <= check_to; ++i)
    if (xi.at(i) != eta.at(i))
      throw std::invalid_argument("tail_cocycle: inputs disagree beyond the given depth");
  std::vector<Letter> letters;
  letters.reserve(2 * static_cast<std::size_t>(agreement_depth));
  for (int i = 1; i <= agreement_depth; ++i) letters.push_back(xi.at(i));
  for (int i = agreement_depth; i >= 1; --i) letters.push_back(inverse_letter(eta.at(i)));
  return ReducedWord(xi.rank(), letters);
}

// Window selection for horoball enumeration. `ball` is the standard window
// (all cocycle lengths up to 2n); `sphere` keeps only members at cocycle
// length exactly 2n and carries no convergence claim.
enum class BallWindow { ball, sphere };

// Streams the members of the index-n horoball at xi: every eta agreeing with
// xi beyond coordinate n. The visited BoundaryPoint is a scratch value reused
// between calls; copy it if it must outlive the visit. Enumeration order is
// lexicographic on the rewritten prefix.
template <class Visitor>
void for_each_horoball_member(BoundaryPoint& xi, int n, Visitor&& visit,
                              BallWindow window = BallWindow::ball) {
  if (n < 0) throw std::invalid_argument("horoball: negative index");
  xi.extend_to(n + 1);
  std::vector<Letter> buf;
  buf.reserve(static_cast<std::size_t>(xi.depth()));
  for (int i = 1; i <= xi.depth(); ++i) buf.push_back(xi.at(i));
  BoundaryPoint scratch(xi.rank(), std::move(buf), xi.tail_seed(), xi.offset());
  if (n == 0) {
    visit(scratch);
    return;
  }
  Letter excluded = inverse_letter(xi.at(n + 1));
  // Sphere-mode members additionally differ from xi at coordinate n, which
  // makes the cocycle length exactly 2n.
  Letter center_last = xi.at(n);
  for_each_nonbacktracking(xi.rank(), n, excluded, [&](std::span<const Letter> prefix) {
    if (window == BallWindow::sphere && prefix[static_cast<std::size_t>(n - 1)] == center_last)
      return;
    scratch.set_prefix(prefix);
    visit(scratch);
  });
}

// A materialized horoball: the center, the index, and each member paired
// with the cocycle word g satisfying g * member = center.
struct HorosphericalBall {
  BoundaryPoint center;
  int index;
  std::vector<std::pair<BoundaryPoint, ReducedWord>> members;
};

inline HorosphericalBall horoball(BoundaryPoint& xi, int n,
                                  BallWindow window = BallWindow::ball) {
  HorosphericalBall ball{xi, n, {}};
  for_each_horoball_member(
      xi, n,
      [&](BoundaryPoint& eta) {
        BoundaryPoint copy = eta;
        ball.members.emplace_back(std::move(copy), tail_cocycle(xi, eta, n));
      },
      window);
  return ball;
}

inline std::uint64_t horoball_size(int rank, int n) {
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c *= static_cast<std::uint64_t>(2 * rank - 1);
  return c;
}

// Subset-sequence adapter over horoballs. The relative weights are
// identically 1: all members of an index-n horoball sit on the same level
// set, so the chain rule leaves no density factor between them.
struct HoroballSeq {
  using point_type = BoundaryPoint;
  using weight_type = int;

  BallWindow window = BallWindow::ball;

  template <class Sink>
  void for_each_member(BoundaryPoint& b, int n, Sink&& sink) const {
    for_each_horoball_member(b, n, [&](BoundaryPoint& m) { sink(m, 1); }, window);
  }

  std::string label(BoundaryPoint& b) const { return b.str(); }
};

}  // namespace horo
