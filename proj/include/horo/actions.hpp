#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "horo/boundary.hpp"
#include "horo/horoball.hpp"
#include "horo/rational.hpp"
#include "horo/rng.hpp"
#include "horo/word.hpp"

namespace horo {

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

struct Vec2 {
  double x = 0, y = 0;
};

using BoundaryPair = std::pair<BoundaryPoint, BoundaryPoint>;

// One point of whichever action is in play.
using ActionPoint = std::variant<std::monostate, int, Vec3, Vec2, BoundaryPair>;

namespace detail {

// 3x3 double matrices for the rotation action.
struct Mat3 {
  double a[9];
};

inline Mat3 mat3_mul(const Mat3& l, const Mat3& r) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += l.a[3 * i + k] * r.a[3 * k + j];
      out.a[3 * i + j] = s;
    }
  return out;
}

inline Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
  return Vec3{m.a[0] * v.x + m.a[1] * v.y + m.a[2] * v.z,
              m.a[3] * v.x + m.a[4] * v.y + m.a[5] * v.z,
              m.a[6] * v.x + m.a[7] * v.y + m.a[8] * v.z};
}

// Rotations by arccos(3/5) about the z and x axes; a classical free pair.
inline Mat3 so3_generator(Letter l) {
  const double c = 3.0 / 5.0, s = 4.0 / 5.0;
  switch (l) {
    case 0: return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
    case 1: return Mat3{{c, s, 0, -s, c, 0, 0, 0, 1}};
    case 2: return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
    case 3: return Mat3{{1, 0, 0, 0, c, s, 0, -s, c}};
    default: throw std::invalid_argument("so3 generator: rank-2 letters only");
  }
}

// The same matrices scaled by 5^pow5 with exact integer entries, for
// freeness certificates.
struct Mat3Exact {
  std::int64_t a[9];
  int pow5;
};

inline Mat3Exact so3_generator_exact(Letter l) {
  switch (l) {
    case 0: return Mat3Exact{{3, -4, 0, 4, 3, 0, 0, 0, 5}, 1};
    case 1: return Mat3Exact{{3, 4, 0, -4, 3, 0, 0, 0, 5}, 1};
    case 2: return Mat3Exact{{5, 0, 0, 0, 3, -4, 0, 4, 3}, 1};
    case 3: return Mat3Exact{{5, 0, 0, 0, 3, 4, 0, -4, 3}, 1};
    default: throw std::invalid_argument("so3 generator: rank-2 letters only");
  }
}

inline Mat3Exact mat3e_mul(const Mat3Exact& l, const Mat3Exact& r) {
  Mat3Exact out{{}, l.pow5 + r.pow5};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < 3; ++k) s += l.a[3 * i + k] * r.a[3 * k + j];
      out.a[3 * i + j] = s;
    }
  return out;
}

inline bool mat3e_is_identity(const Mat3Exact& m) {
  std::int64_t scale = 1;
  for (int i = 0; i < m.pow5; ++i) scale *= 5;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (m.a[3 * i + j] != (i == j ? scale : 0)) return false;
  return true;
}

// Integer 2x2 matrices for the plane action (the unipotent pair with
// off-diagonal entry 2).
struct Mat2Exact {
  std::int64_t a[4];
};

inline Mat2Exact sanov_generator_exact(Letter l) {
  switch (l) {
    case 0: return Mat2Exact{{1, 2, 0, 1}};
    case 1: return Mat2Exact{{1, -2, 0, 1}};
    case 2: return Mat2Exact{{1, 0, 2, 1}};
    case 3: return Mat2Exact{{1, 0, -2, 1}};
    default: throw std::invalid_argument("plane generator: rank-2 letters only");
  }
}

inline Mat2Exact mat2e_mul(const Mat2Exact& l, const Mat2Exact& r) {
  return Mat2Exact{{l.a[0] * r.a[0] + l.a[1] * r.a[2], l.a[0] * r.a[1] + l.a[1] * r.a[3],
                    l.a[2] * r.a[0] + l.a[3] * r.a[2], l.a[2] * r.a[1] + l.a[3] * r.a[3]}};
}

inline bool mat2e_is_identity(const Mat2Exact& m) {
  return m.a[0] == 1 && m.a[1] == 0 && m.a[2] == 0 && m.a[3] == 1;
}

template <class M, class Gen, class Mul>
M word_matrix(const ReducedWord& g, Gen&& gen, Mul&& mul, M identity) {
  M out = identity;
  for (Letter l : g.letters()) out = mul(out, gen(l));
  return out;
}

inline double box_muller_pair(Stream& s, double& second) {
  double u1 = 1.0 - s.next_unit();
  double u2 = s.next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  second = r * std::sin(2.0 * std::numbers::pi * u2);
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

// A non-singular action of the rank-r free group: generator-by-generator
// application plus the Radon-Nikodym data of the reference measure. The
// convention: rn(g, x) is the local volume distortion of the g-map at x,
// i.e. the ratio (measure of T_g U) / (measure of U) for small U at x, so
// rn(g h, x) = rn(g, T_h x) * rn(h, x). Actions that can report the
// derivative exactly do so through rn_exact and declare zero tolerance.
class NonSingularAction {
public:
  virtual ~NonSingularAction() = default;
  virtual std::string name() const = 0;
  virtual int rank() const = 0;
  virtual ActionPoint sample(std::uint64_t seed) const = 0;
  // Density of `sample` relative to the reference measure (for importance
  // weighting when the reference measure is not a probability).
  virtual double sample_density(const ActionPoint&) const { return 1.0; }
  virtual ActionPoint apply(const ReducedWord& g, const ActionPoint& x) const = 0;
  virtual double rn(const ReducedWord& g, const ActionPoint& x) const = 0;
  virtual std::optional<Rational> rn_exact(const ReducedWord&, const ActionPoint&) const {
    return std::nullopt;
  }
  virtual double cocycle_tolerance() const = 0;
};

// The one-point action: everything fixed, derivative identically one.
class TrivialAction final : public NonSingularAction {
public:
  explicit TrivialAction(int rank) : rank_(rank) {}
  std::string name() const override { return "trivial"; }
  int rank() const override { return rank_; }
  ActionPoint sample(std::uint64_t) const override { return std::monostate{}; }
  ActionPoint apply(const ReducedWord& g, const ActionPoint& x) const override {
    if (g.rank() != rank_) throw std::invalid_argument("trivial action: rank mismatch");
    return x;
  }
  double rn(const ReducedWord&, const ActionPoint&) const override { return 1.0; }
  std::optional<Rational> rn_exact(const ReducedWord&, const ActionPoint&) const override {
    return Rational(1);
  }
  double cocycle_tolerance() const override { return 0.0; }

private:
  int rank_;
};

// A random action on a finite weighted set: one permutation per generator,
// positive rational weights, derivative w(T_g x) / w(x).
class FiniteModelAction final : public NonSingularAction {
public:
  FiniteModelAction(int rank, std::uint64_t seed) : rank_(rank) {
    Stream s(seed);
    int f = 2 + static_cast<int>(s.next_below(7));
    perm_.resize(static_cast<std::size_t>(rank));
    inv_.resize(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) {
      auto& p = perm_[static_cast<std::size_t>(i)];
      p.resize(static_cast<std::size_t>(f));
      for (int x = 0; x < f; ++x) p[static_cast<std::size_t>(x)] = x;
      for (std::size_t k = p.size(); k > 1; --k)
        std::swap(p[k - 1], p[static_cast<std::size_t>(s.next_below(k))]);
      auto& q = inv_[static_cast<std::size_t>(i)];
      q.resize(static_cast<std::size_t>(f));
      for (int x = 0; x < f; ++x) q[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])] = x;
    }
    lambda_.reserve(static_cast<std::size_t>(f));
    for (int x = 0; x < f; ++x)
      lambda_.emplace_back(1 + static_cast<std::int64_t>(s.next_below(24)), 12);
  }

  std::string name() const override { return "finite_model"; }
  int rank() const override { return rank_; }
  int points() const { return static_cast<int>(lambda_.size()); }

  ActionPoint sample(std::uint64_t seed) const override {
    return static_cast<int>(bounded(keyed_draw(seed, 0), static_cast<std::uint64_t>(points())));
  }

  ActionPoint apply(const ReducedWord& g, const ActionPoint& x) const override {
    if (g.rank() != rank_) throw std::invalid_argument("finite action: rank mismatch");
    int p = std::get<int>(x);
    const auto& ls = g.letters();
    for (std::size_t i = ls.size(); i > 0; --i) p = step(ls[i - 1], p);
    return p;
  }

  double rn(const ReducedWord& g, const ActionPoint& x) const override {
    return rn_exact(g, x)->to_double();
  }

  std::optional<Rational> rn_exact(const ReducedWord& g, const ActionPoint& x) const override {
    int p = std::get<int>(x);
    int q = std::get<int>(apply(g, x));
    return lambda_[static_cast<std::size_t>(q)] / lambda_[static_cast<std::size_t>(p)];
  }

  double cocycle_tolerance() const override { return 0.0; }

private:
  int step(Letter l, int p) const {
    int gen = l >> 1;
    const auto& table = (l & 1) ? inv_[static_cast<std::size_t>(gen)] : perm_[static_cast<std::size_t>(gen)];
    return table[static_cast<std::size_t>(p)];
  }

  int rank_;
  std::vector<std::vector<int>> perm_, inv_;
  std::vector<Rational> lambda_;
};

// Rotations of the unit sphere by arccos(3/5) about the z and x axes, a free
// pair; normalized area is preserved, so the derivative is identically one.
class So3SphereAction final : public NonSingularAction {
public:
  So3SphereAction() = default;
  std::string name() const override { return "so3_sphere"; }
  int rank() const override { return 2; }

  ActionPoint sample(std::uint64_t seed) const override {
    Stream s(seed);
    double y, z2;
    double x = detail::box_muller_pair(s, y);
    double z = detail::box_muller_pair(s, z2);
    double norm = std::sqrt(x * x + y * y + z * z);
    if (norm == 0.0) return Vec3{0, 0, 1};
    return Vec3{x / norm, y / norm, z / norm};
  }

  ActionPoint apply(const ReducedWord& g, const ActionPoint& x) const override {
    if (g.rank() != 2) throw std::invalid_argument("so3 action: rank-2 words only");
    const Vec3& v = std::get<Vec3>(x);
    detail::Mat3 id{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
    detail::Mat3 m = detail::word_matrix(g, detail::so3_generator, detail::mat3_mul, id);
    return detail::mat3_apply(m, v);
  }

  double rn(const ReducedWord&, const ActionPoint&) const override { return 1.0; }
  std::optional<Rational> rn_exact(const ReducedWord&, const ActionPoint&) const override {
    return Rational(1);
  }
  double cocycle_tolerance() const override { return 0.0; }
};

// The unipotent pair with off-diagonal entry 2 acting linearly on the
// punctured plane; Lebesgue measure is preserved (determinant one). Points
// are sampled from a standard Gaussian, whose density against Lebesgue is
// reported for importance weighting.
class SanovPlaneAction final : public NonSingularAction {
public:
  SanovPlaneAction() = default;
  std::string name() const override { return "sanov_plane"; }
  int rank() const override { return 2; }

  ActionPoint sample(std::uint64_t seed) const override {
    Stream s(seed);
    double y;
    double x = detail::box_muller_pair(s, y);
    return Vec2{x, y};
  }

  double sample_density(const ActionPoint& x) const override {
    const Vec2& v = std::get<Vec2>(x);
    return std::exp(-0.5 * (v.x * v.x + v.y * v.y)) / (2.0 * std::numbers::pi);
  }

  ActionPoint apply(const ReducedWord& g, const ActionPoint& x) const override {
    if (g.rank() != 2) throw std::invalid_argument("plane action: rank-2 words only");
    const Vec2& v = std::get<Vec2>(x);
    detail::Mat2Exact id{{1, 0, 0, 1}};
    detail::Mat2Exact m = detail::word_matrix(g, detail::sanov_generator_exact, detail::mat2e_mul, id);
    return Vec2{static_cast<double>(m.a[0]) * v.x + static_cast<double>(m.a[1]) * v.y,
                static_cast<double>(m.a[2]) * v.x + static_cast<double>(m.a[3]) * v.y};
  }

  double rn(const ReducedWord&, const ActionPoint&) const override { return 1.0; }
  std::optional<Rational> rn_exact(const ReducedWord&, const ActionPoint&) const override {
    return Rational(1);
  }
  double cocycle_tolerance() const override { return 0.0; }
};

// The diagonal action on an independent pair of boundary points with the
// product of the two boundary measures; the derivative is the product of
// the two exact per-factor powers of 2r-1.
class BoundaryPairAction final : public NonSingularAction {
public:
  explicit BoundaryPairAction(int rank) : rank_(rank) {}
  std::string name() const override { return "boundary_pair"; }
  int rank() const override { return rank_; }

  ActionPoint sample(std::uint64_t seed) const override {
    return BoundaryPair{BoundaryPoint(rank_, derive_stream(seed, 1)),
                        BoundaryPoint(rank_, derive_stream(seed, 2))};
  }

  ActionPoint apply(const ReducedWord& g, const ActionPoint& x) const override {
    BoundaryPair p = std::get<BoundaryPair>(x);
    return BoundaryPair{act(g, p.first).image, act(g, p.second).image};
  }

  double rn(const ReducedWord& g, const ActionPoint& x) const override {
    return rn_exact(g, x)->to_double();
  }

  std::optional<Rational> rn_exact(const ReducedWord& g, const ActionPoint& x) const override {
    BoundaryPair p = std::get<BoundaryPair>(x);
    int e = act(g, p.first).rn_exponent + act(g, p.second).rn_exponent;
    return Rational::pow(2 * rank_ - 1, e);
  }

  double cocycle_tolerance() const override { return 0.0; }

private:
  int rank_;
};

inline std::vector<std::string> action_registry() {
  return {"trivial", "finite_model", "so3_sphere", "sanov_plane", "boundary_pair"};
}

inline std::unique_ptr<NonSingularAction> make_action(const std::string& name, std::uint64_t seed,
                                                      int rank = 2) {
  if (name == "trivial") return std::make_unique<TrivialAction>(rank);
  if (name == "finite_model") return std::make_unique<FiniteModelAction>(rank, seed);
  if (name == "so3_sphere") return std::make_unique<So3SphereAction>();
  if (name == "sanov_plane") return std::make_unique<SanovPlaneAction>();
  if (name == "boundary_pair") return std::make_unique<BoundaryPairAction>(rank);
  throw std::invalid_argument("unknown action: " + name);
}

// Horoball averaging skewed by an action: each member eta of the index-n
// horoball at xi moves the fiber point by the word carrying xi to eta, and
// the weight is that word's derivative at the current fiber point.
struct ActionSkewSeq {
  using point_type = std::pair<BoundaryPoint, ActionPoint>;
  using weight_type = double;

  const NonSingularAction* action = nullptr;
  BallWindow window = BallWindow::ball;

  template <class Sink>
  void for_each_member(point_type& bx, int n, Sink&& sink) const {
    for_each_horoball_member(
        bx.first,
        n,
        [&](BoundaryPoint& eta) {
          ReducedWord to_eta = inverse(tail_cocycle(bx.first, eta, n));
          point_type m{eta, action->apply(to_eta, bx.second)};
          sink(m, action->rn(to_eta, bx.second));
        },
        window);
  }

  std::string label(point_type& bx) const { return bx.first.str(); }
};

}  // namespace horo
