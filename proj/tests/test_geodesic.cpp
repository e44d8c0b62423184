#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/automorphism.hpp"
#include "horo/boundary.hpp"
#include "horo/geodesic.hpp"
#include "horo/horoball.hpp"
#include "horo/relation.hpp"
#include "horo/rng.hpp"
#include "horo/word.hpp"

using horo::BoundaryPoint;
using horo::Letter;
using horo::PrefixBijection;
using horo::ReducedWord;
using horo::StepWindow;

namespace {

// Vertex of the connecting geodesic at position n, as a reduced word:
// the to-prefix above the branch point, the from-prefix below it.
ReducedWord vertex(BoundaryPoint& from, BoundaryPoint& toward, int j, int n) {
  std::vector<Letter> ls;
  if (n >= j - 1) {
    for (int i = 1; i <= n; ++i) ls.push_back(toward.at(i));
  } else {
    for (int i = 1; i <= 2 * (j - 1) - n; ++i) ls.push_back(from.at(i));
  }
  return ReducedWord(from.rank(), ls);
}

}  // namespace

TEST_CASE("step window accessors", "[geodesic]") {
  StepWindow w{-2, 2, {3, 1, 0, 2}};
  CHECK(w.at(-2) == 3);
  CHECK(w.at(1) == 2);
  CHECK_THROWS_AS(w.at(2), std::out_of_range);
  CHECK_THROWS_AS(w.at(-3), std::out_of_range);
  CHECK(w.str() == "A2.A1.a1.a2");
  CHECK(StepWindow{}.str() == "-");
}

TEST_CASE("geodesic steps by hand, branch at the first letter", "[geodesic]") {
  BoundaryPoint from(2, std::vector<Letter>{1, 2, 0}, 10);  // A1.a2.a1...
  BoundaryPoint toward(2, std::vector<Letter>{0, 2, 0}, 11);  // a1.a2.a1...
  CHECK(horo::first_disagreement(from, toward, 4) == 1);
  auto steps = horo::geodesic_steps(from, toward, 3);
  CHECK(steps.lo == -3);
  CHECK(steps.hi == 3);
  CHECK(steps.str() == "A1.A2.a1.a1.a2.a1");
}

TEST_CASE("geodesic steps by hand, branch behind a shared prefix", "[geodesic]") {
  // Shared prefix a1.a2, disagreement at position 3.
  BoundaryPoint from(2, std::vector<Letter>{0, 2, 0, 2, 0, 2}, 20);
  BoundaryPoint toward(2, std::vector<Letter>{0, 2, 2}, 21);
  CHECK(horo::first_disagreement(from, toward, 4) == 3);
  auto steps = horo::geodesic_steps(from, toward, 2);
  CHECK(steps.str() == "A2.A1.A2.A1");
  CHECK(steps.at(-2) == 3);
  CHECK(steps.at(0) == 3);
  CHECK(steps.at(1) == 1);
}

TEST_CASE("geodesic rejects degenerate input", "[geodesic]") {
  BoundaryPoint a(2, 5), b(2, 5);
  CHECK_THROWS_AS(horo::geodesic_steps(a, b, 3), std::invalid_argument);
  BoundaryPoint c(2, 5), d(2, 6);
  CHECK_THROWS_AS(horo::geodesic_steps(c, d, -1), std::invalid_argument);
  BoundaryPoint e(3, 5);
  CHECK_THROWS_AS(horo::first_disagreement(c, e, 2), std::invalid_argument);
}

TEST_CASE("steps agree with the vertex-path oracle", "[geodesic]") {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    BoundaryPoint from(2, horo::derive_stream(1000, 2 * trial));
    BoundaryPoint toward(2, horo::derive_stream(1000, 2 * trial + 1));
    const int w = 4;
    int j = horo::first_disagreement(from, toward, 2 * w + 2);
    auto steps = horo::geodesic_steps(from, toward, w);
    for (int n = -w; n < w; ++n) {
      auto here = vertex(from, toward, j, n);
      auto next = vertex(from, toward, j, n + 1);
      // Each vertex sits on the -n level set of the forward endpoint, and
      // consecutive vertices differ by exactly the recorded step letter.
      REQUIRE(horo::busemann_level(here, toward) == -n);
      auto step = multiply(inverse(here), next);
      REQUIRE(step.length() == 1);
      REQUIRE(step.letters()[0] == steps.at(n));
    }
    auto last = vertex(from, toward, j, w);
    REQUIRE(horo::busemann_level(last, toward) == -w);
  }
}

TEST_CASE("horosphere samples have the promised shape", "[geodesic]") {
  horo::Stream s(0x1234ULL);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    BoundaryPoint xi(2, horo::derive_stream(2000, trial));
    for (int l = 0; l <= 5; ++l) {
      auto g = horo::sample_horosphere_element(xi, l, s);
      REQUIRE(g.length() == 2 * l);
      REQUIRE(horo::busemann_level(g, xi) == 0);
      for (int i = 0; i < l; ++i) REQUIRE(g.letters()[static_cast<std::size_t>(i)] == xi.at(i + 1));
      // g^-1 xi agrees with xi beyond coordinate l: it lies in the index-l
      // horoball at xi, with the draw offset intact.
      BoundaryPoint x2 = xi;
      auto r = horo::act(inverse(g), x2);
      REQUIRE(r.rn_exponent == 0);
      for (int i = l + 1; i <= l + 6; ++i) REQUIRE(r.image.at(i) == xi.at(i));
    }
  }
  BoundaryPoint tmp(2, 1);
  CHECK_THROWS_AS(horo::sample_horosphere_element(tmp, -1, s), std::invalid_argument);
}

TEST_CASE("sampler reaches both admissible first block letters", "[geodesic]") {
  BoundaryPoint xi(2, 42);
  horo::Stream s(7);
  std::set<Letter> first_block;
  for (int i = 0; i < 64; ++i) {
    auto g = horo::sample_horosphere_element(xi, 2, s);
    first_block.insert(g.letters()[2]);
  }
  // 2r - 2 = 2 letters avoid both the extension letter and the cancellation.
  CHECK(first_block.size() == 2);
  CHECK(first_block.count(xi.at(3)) == 0);
  CHECK(first_block.count(horo::inverse_letter(xi.at(2))) == 0);
}

TEST_CASE("step window is invariant under level-zero moves of both endpoints", "[geodesic]") {
  horo::Stream s(0x77aaULL);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    BoundaryPoint from(2, horo::derive_stream(3000, 2 * trial));
    BoundaryPoint toward(2, horo::derive_stream(3000, 2 * trial + 1));
    auto reference = horo::geodesic_steps(from, toward, 3);
    for (int mv = 0; mv < 4; ++mv) {
      int l = 1 + static_cast<int>(s.next_below(4));
      auto g = horo::sample_horosphere_element(toward, l, s);
      BoundaryPoint f2 = from, t2 = toward;
      auto moved_from = horo::act(inverse(g), f2).image;
      auto moved_toward = horo::act(inverse(g), t2).image;
      auto moved = horo::geodesic_steps(moved_from, moved_toward, 3);
      REQUIRE(moved == reference);
    }
  }
}

TEST_CASE("a level -1 move shifts the step window by one", "[geodesic]") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    BoundaryPoint from(2, horo::derive_stream(4000, 2 * trial));
    BoundaryPoint toward(2, horo::derive_stream(4000, 2 * trial + 1));
    auto wide = horo::geodesic_steps(from, toward, 4);
    ReducedWord g(2, std::vector<Letter>{toward.at(1)});  // busemann level -1
    REQUIRE(horo::busemann_level(g, toward) == -1);
    BoundaryPoint f2 = from, t2 = toward;
    auto moved_from = horo::act(inverse(g), f2).image;
    auto moved_toward = horo::act(inverse(g), t2).image;
    auto shifted = horo::geodesic_steps(moved_from, moved_toward, 3);
    for (int n = -3; n < 3; ++n) REQUIRE(shifted.at(n) == wide.at(n + 1));
  }
}

TEST_CASE("prefix bijection: identity, validity, determinism", "[automorphism]") {
  auto id = PrefixBijection::identity(2, 2);
  CHECK(id.rank() == 2);
  CHECK(id.order() == 2);
  BoundaryPoint xi(2, 91);
  auto same = id.apply(xi);
  CHECK(same.key(12) == xi.key(12));

  auto phi1 = PrefixBijection::random(2, 3, 555);
  auto phi2 = PrefixBijection::random(2, 3, 555);
  BoundaryPoint p(2, 17);
  BoundaryPoint pa = p, pb = p;
  CHECK(phi1.apply(pa).key(10) == phi2.apply(pb).key(10));
  // Order-1 tables are forced to the identity (the final letter is fixed).
  auto tiny = PrefixBijection::random(2, 1, 99);
  BoundaryPoint q(2, 23);
  CHECK(tiny.apply(q).key(10) == q.key(10));
}

TEST_CASE("prefix bijection preserves the final letter and the tail", "[automorphism]") {
  auto phi = PrefixBijection::random(2, 3, 808);
  for (std::uint64_t t = 0; t < 30; ++t) {
    BoundaryPoint xi(2, horo::derive_stream(5000, t));
    auto img = phi.apply(xi);
    CHECK(img.at(3) == xi.at(3));
    CHECK(img.tail_seed() == xi.tail_seed());
    CHECK(img.offset() == xi.offset());
    for (int i = 4; i <= 14; ++i) REQUIRE(img.at(i) == xi.at(i));
    // Admissible image prefix.
    for (int i = 1; i < 14; ++i) REQUIRE(img.at(i + 1) != horo::inverse_letter(img.at(i)));
  }
}

TEST_CASE("prefix bijection permutes horoballs of index at least the order", "[automorphism]") {
  auto phi = PrefixBijection::random(2, 2, 4040);
  BoundaryPoint xi(2, 67);
  for (int n : {2, 3}) {
    std::set<std::string> members, images;
    horo::for_each_horoball_member(xi, n, [&](BoundaryPoint& eta) {
      members.insert(eta.key(n + 6));
      auto img = phi.apply(eta);
      images.insert(img.key(n + 6));
    });
    CHECK(images == members);
  }
}

TEST_CASE("hand-built table swaps two prefixes", "[automorphism]") {
  std::map<std::string, std::vector<Letter>> table;
  horo::for_each_nonbacktracking(2, 2, std::nullopt, [&](std::span<const Letter> p) {
    table.emplace(std::string(reinterpret_cast<const char*>(p.data()), p.size()),
                  std::vector<Letter>(p.begin(), p.end()));
  });
  const std::string ka{'\x00', '\x02'};  // a1.a2
  const std::string kb{'\x02', '\x02'};  // a2.a2
  std::swap(table[ka], table[kb]);
  PrefixBijection phi(2, 2, table);
  BoundaryPoint xi(2, std::vector<Letter>{0, 2, 0}, 3);
  auto img = phi.apply(xi);
  CHECK(img.at(1) == 2);
  CHECK(img.at(2) == 2);
  CHECK(img.at(3) == 0);
  // Applying the swap twice returns to the original point.
  auto back = phi.apply(img);
  CHECK(back.key(10) == xi.key(10));
}

TEST_CASE("invalid tables are rejected", "[automorphism]") {
  auto make_table = [](int order) {
    std::map<std::string, std::vector<Letter>> table;
    horo::for_each_nonbacktracking(2, order, std::nullopt, [&](std::span<const Letter> p) {
      table.emplace(std::string(reinterpret_cast<const char*>(p.data()), p.size()),
                    std::vector<Letter>(p.begin(), p.end()));
    });
    return table;
  };

  {
    auto t = make_table(1);
    t[std::string(1, '\x00')] = {2};  // moves the final letter
    CHECK_THROWS_AS(PrefixBijection(2, 1, t), std::invalid_argument);
  }
  {
    auto t = make_table(2);
    t[std::string{'\x00', '\x02'}] = t[std::string{'\x02', '\x02'}];  // duplicate image
    CHECK_THROWS_AS(PrefixBijection(2, 2, t), std::invalid_argument);
  }
  {
    auto t = make_table(2);
    t.erase(std::string{'\x00', '\x02'});  // missing entry
    CHECK_THROWS_AS(PrefixBijection(2, 2, t), std::invalid_argument);
  }
  {
    auto t = make_table(2);
    t[std::string{'\x00', '\x02'}] = {3, 2};  // backtracking image A2.a2
    CHECK_THROWS_AS(PrefixBijection(2, 2, t), std::invalid_argument);
  }
  {
    auto t = make_table(2);
    t[std::string{'\x00', '\x02'}] = {2};  // wrong length
    CHECK_THROWS_AS(PrefixBijection(2, 2, t), std::invalid_argument);
  }
  CHECK_THROWS_AS(PrefixBijection::random(2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(PrefixBijection::identity(1, 2), std::invalid_argument);

  auto phi = PrefixBijection::identity(2, 2);
  BoundaryPoint zeta(3, 8);
  CHECK_THROWS_AS(phi.image_prefix(zeta), std::invalid_argument);
}

TEST_CASE("symmetry deficits vanish on invariant horoballs", "[automorphism][relation]") {
  auto phi = PrefixBijection::random(2, 2, 321);
  horo::HoroballSeq seq;
  // u depends on the first three letters only; integer-valued for exactness.
  auto u = [](BoundaryPoint& b) -> long long {
    return 9 * b.at(1) + 3 * b.at(2) + b.at(3) + 1;
  };
  auto u_phi = horo::make_u_phi(u, [&](BoundaryPoint& b) { return phi.apply(b); });
  for (std::uint64_t t = 0; t < 10; ++t) {
    BoundaryPoint b(2, horo::derive_stream(6000, t));
    for (int n = 2; n <= 5; ++n) {
      long long s = horo::weighted_sum<long long>(seq, u_phi, b, n);
      REQUIRE(s == 0);
    }
  }
  // Below the order the deficit has no reason to cancel; witness one point
  // where it does not, so the zero above is not an artifact.
  bool nonzero_seen = false;
  for (std::uint64_t t = 0; t < 40 && !nonzero_seen; ++t) {
    BoundaryPoint b(2, horo::derive_stream(6100, t));
    for (int n = 0; n <= 1 && !nonzero_seen; ++n)
      if (horo::weighted_sum<long long>(seq, u_phi, b, n) != 0) nonzero_seen = true;
  }
  CHECK(nonzero_seen);
}
