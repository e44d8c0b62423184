#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "horo/rational.hpp"

namespace horo {

// The engine below is generic over "subset sequences": a type F exposing
//
//   typename F::point_type;                 // a point of the model
//   typename F::weight_type;                // type of relative weights D
//   f.for_each_member(b, n, sink)           // sink(member&, weight)
//   f.label(b)                              // short text naming b in errors
//
// where for_each_member streams the members of F_n(b) together with the
// relative weight D(member, b). Member references passed to the sink may be
// scratch storage reused between calls.

template <class F>
concept SubsetSeq = requires {
  typename F::point_type;
  typename F::weight_type;
};

// Plain accumulation for exact types, Neumaier-compensated for double so
// streaming order never costs more than one ulp of the compensated result.
template <class A>
struct Accumulator {
  A total{};
  void add(const A& v) { total = total + v; }
  A value() const { return total; }
};

template <>
struct Accumulator<double> {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Conversion into the accumulator type; rationals lower to double only when
// the accumulator is floating point, and floating values never silently
// convert to exact rationals.
template <class A, class X>
A as_accumulant(const X& x) {
  if constexpr (std::is_same_v<std::remove_cvref_t<X>, Rational>) {
    if constexpr (std::is_floating_point_v<A>)
      return static_cast<A>(x.to_double());
    else
      return A(x);
  } else {
    static_assert(!(std::is_same_v<A, Rational> && std::is_floating_point_v<std::remove_cvref_t<X>>),
                  "refusing lossy float-to-rational accumulation");
    return static_cast<A>(x);
  }
}

// SUM_n[u](b) = sum over members b' of F_n(b) of u(b') D(b', b), accumulated
// in A (double => compensated, Rational / integer => exact).
template <class A, SubsetSeq F, class U>
A weighted_sum(const F& seq, U&& u, typename F::point_type& b, int n) {
  Accumulator<A> acc;
  seq.for_each_member(b, n, [&](typename F::point_type& m, const typename F::weight_type& d) {
    acc.add(as_accumulant<A>(u(m)) * as_accumulant<A>(d));
  });
  return acc.value();
}

// Raised when a ratio average hits a vanishing denominator sum.
class DegenerateDenominator : public std::runtime_error {
public:
  DegenerateDenominator(const std::string& label, int n)
      : std::runtime_error("ratio average degenerate at point " + label + ", index " +
                          std::to_string(n)),
        point_label(label),
        index(n) {}
  std::string point_label;
  int index;
};

template <class A>
struct RatioPoint {
  int n;
  A num;
  A den;
  A ratio() const { return num / den; }
};

// RATIO_n[u, v](b) for n in [lo, hi], one streaming pass per index.
template <class A, SubsetSeq F, class U, class V>
std::vector<RatioPoint<A>> ratio_series(const F& seq, U&& u, V&& v, typename F::point_type& b,
                                        int lo, int hi) {
  std::vector<RatioPoint<A>> out;
  out.reserve(static_cast<std::size_t>(hi >= lo ? hi - lo + 1 : 0));
  for (int n = lo; n <= hi; ++n) {
    A num = weighted_sum<A>(seq, u, b, n);
    A den = weighted_sum<A>(seq, v, b, n);
    if (den == A{}) throw DegenerateDenominator(seq.label(b), n);
    out.push_back(RatioPoint<A>{n, num, den});
  }
  return out;
}

// The deficit function u_phi(b) = u(b) - u(phi(b)) D(phi(b), b) for a
// symmetry phi of the sequence; on unit-weight sequences the weight factor
// is 1. SUM_n[u_phi] vanishes identically once F_n is phi-invariant.
template <class U, class Phi>
auto make_u_phi(U u, Phi phi) {
  return [u = std::move(u), phi = std::move(phi)](auto& b) {
    auto pb = phi(b);
    return u(b) - u(pb);
  };
}

template <class U, class Phi, class DW>
auto make_u_phi(U u, Phi phi, DW dweight) {
  return [u = std::move(u), phi = std::move(phi), dweight = std::move(dweight)](auto& b) {
    auto pb = phi(b);
    return u(b) - u(pb) * dweight(pb, b);
  };
}

}  // namespace horo
