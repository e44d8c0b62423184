#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "horo/finite_model.hpp"
#include "horo/rational.hpp"
#include "horo/rng.hpp"

namespace horo {

// Fiber system for skew extensions by an integer cocycle: one permutation
// generates a Z-action on a finite fiber carrying positive weights. rn(g, x)
// is the density of the g-translated weights against lambda at x, so it is
// identically 1 exactly when lambda is constant along orbits.
struct FiberAction {
  std::vector<int> perm;
  std::vector<int> inv;
  std::vector<Rational> lambda;

  int size() const { return static_cast<int>(perm.size()); }

  int apply(int g, int x) const {
    if (g >= 0)
      for (int i = 0; i < g; ++i) x = perm[static_cast<std::size_t>(x)];
    else
      for (int i = 0; i < -g; ++i) x = inv[static_cast<std::size_t>(x)];
    return x;
  }

  Rational rn(int g, int x) const {
    return lambda[static_cast<std::size_t>(apply(g, x))] / lambda[static_cast<std::size_t>(x)];
  }

  bool measure_preserving() const {
    for (int x = 0; x < size(); ++x)
      if (!(lambda[static_cast<std::size_t>(perm[static_cast<std::size_t>(x)])] ==
            lambda[static_cast<std::size_t>(x)]))
        return false;
    return true;
  }

  // Half the draws are measure preserving (weights constant along orbits),
  // half carry a genuinely varying density.
  static FiberAction random(std::uint64_t seed, int max_fiber = 4) {
    Stream s(seed);
    int f = 1 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(max_fiber)));
    FiberAction a;
    a.perm.resize(static_cast<std::size_t>(f));
    std::iota(a.perm.begin(), a.perm.end(), 0);
    for (std::size_t i = a.perm.size(); i > 1; --i)
      std::swap(a.perm[i - 1], a.perm[static_cast<std::size_t>(s.next_below(i))]);
    a.inv.resize(a.perm.size());
    for (int x = 0; x < f; ++x) a.inv[static_cast<std::size_t>(a.perm[static_cast<std::size_t>(x)])] = x;
    bool preserving = s.next_below(2) == 0;
    a.lambda.assign(static_cast<std::size_t>(f), Rational(1));
    if (preserving) {
      // One weight per orbit of the permutation.
      std::vector<bool> seen(static_cast<std::size_t>(f), false);
      for (int x = 0; x < f; ++x) {
        if (seen[static_cast<std::size_t>(x)]) continue;
        Rational w(1 + static_cast<std::int64_t>(s.next_below(24)), 12);
        int y = x;
        while (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = true;
          a.lambda[static_cast<std::size_t>(y)] = w;
          y = a.perm[static_cast<std::size_t>(y)];
        }
      }
    } else {
      for (auto& w : a.lambda) w = Rational(1 + static_cast<std::int64_t>(s.next_below(24)), 12);
    }
    return a;
  }
};

// Subset sequence of the skew extension: the base member carries the fiber
// point along by the cocycle difference, and the relative weight picks up
// the fiber density at the starting fiber point.
struct SkewModelSeq {
  using point_type = std::pair<int, int>;  // (base point, fiber point)
  using weight_type = Rational;

  const FiniteModel* base = nullptr;
  const std::vector<int>* cocycle = nullptr;
  const FiberAction* fiber = nullptr;

  template <class Sink>
  void for_each_member(point_type& bx, int n, Sink&& sink) const {
    if (n < 1) {
      point_type self = bx;
      sink(self, Rational(1));
      return;
    }
    const int b = bx.first, x = bx.second;
    for (int p : base->member_list(b, n)) {
      int a = (*cocycle)[static_cast<std::size_t>(p)] - (*cocycle)[static_cast<std::size_t>(b)];
      point_type m{p, fiber->apply(a, x)};
      sink(m, (base->weight[static_cast<std::size_t>(p)] / base->weight[static_cast<std::size_t>(b)]) *
                  fiber->rn(a, x));
    }
  }

  std::string label(point_type& bx) const {
    return "(" + std::to_string(bx.first) + "," + std::to_string(bx.second) + ")";
  }
};

namespace detail {
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void join(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};
}  // namespace detail

// The skew extension as an ordinary finite model on base x fiber, with
// point (b, x) at index b * fiber_size + x, product weights, member lists
// from the skew relation and classes from its top-level components.
inline FiniteModel materialize_skew(const FiniteModel& base, const std::vector<int>& cocycle,
                                    const FiberAction& fiber) {
  const int f = fiber.size();
  const int size = base.size() * f;
  auto idx = [f](int b, int x) { return b * f + x; };

  FiniteModel m;
  m.weight.reserve(static_cast<std::size_t>(size));
  for (int b = 0; b < base.size(); ++b)
    for (int x = 0; x < f; ++x)
      m.weight.push_back(base.weight[static_cast<std::size_t>(b)] *
                         fiber.lambda[static_cast<std::size_t>(x)]);

  SkewModelSeq seq{&base, &cocycle, &fiber};
  m.members.assign(static_cast<std::size_t>(base.levels()),
                   std::vector<std::vector<int>>(static_cast<std::size_t>(size)));
  for (int level = 1; level <= base.levels(); ++level) {
    for (int b = 0; b < base.size(); ++b) {
      for (int x = 0; x < f; ++x) {
        std::vector<int> list;
        SkewModelSeq::point_type bx{b, x};
        seq.for_each_member(bx, level, [&](SkewModelSeq::point_type& p, const Rational&) {
          list.push_back(idx(p.first, p.second));
        });
        std::sort(list.begin(), list.end());
        m.members[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(idx(b, x))] =
            std::move(list);
      }
    }
  }

  detail::UnionFind uf(size);
  for (int p = 0; p < size; ++p)
    for (int q : m.members.back()[static_cast<std::size_t>(p)]) uf.join(p, q);
  m.cls.assign(static_cast<std::size_t>(size), -1);
  std::vector<int> remap(static_cast<std::size_t>(size), -1);
  int next = 0;
  for (int p = 0; p < size; ++p) {
    int root = uf.find(p);
    if (remap[static_cast<std::size_t>(root)] < 0) remap[static_cast<std::size_t>(root)] = next++;
    m.cls[static_cast<std::size_t>(p)] = remap[static_cast<std::size_t>(root)];
  }
  m.validate();
  return m;
}

// A complete random scenario: base model, integer potential cocycle, fiber
// system, and the materialized product.
struct SkewScenario {
  FiniteModel base;
  std::vector<int> cocycle;
  FiberAction fiber;
  FiniteModel product;
};

inline SkewScenario random_skew_scenario(std::uint64_t seed, int max_base = 16, int max_fiber = 4,
                                         int levels = 6) {
  SkewScenario sc;
  sc.base = random_finite_model(derive_stream(seed, 1), max_base, levels);
  sc.fiber = FiberAction::random(derive_stream(seed, 2), max_fiber);
  Stream s(derive_stream(seed, 3));
  sc.cocycle.resize(static_cast<std::size_t>(sc.base.size()));
  for (auto& c : sc.cocycle) c = static_cast<int>(s.next_below(8));
  sc.product = materialize_skew(sc.base, sc.cocycle, sc.fiber);
  return sc;
}

}  // namespace horo
