#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "horo/finite_model.hpp"
#include "horo/rational.hpp"
#include "horo/relation.hpp"

namespace horo {

// Audit of the two maximal bounds on a finite model, for M(b) =
// max_{1<=n<=T} RATIO_n[u, v](b) with u >= 0 and v > 0:
//
//   weak type:  sum_{M>eps} v w  <=  eps^-1 sum_{M>eps} u w  <=  eps^-1 sum u w
//   L^p:        ||M||_{L^p(vw)}  <=  p/(p-1) ||u/v||_{L^p(vw)}
//
// The weak-type side is evaluated in exact rational arithmetic against a
// rational epsilon grid; the L^p side in compensated doubles. Margins are
// right-hand side minus left-hand side, minimized over the grid.
struct MaximalAudit {
  bool weak_ok = true;
  bool lp_ok = true;
  double weak_margin = std::numeric_limits<double>::infinity();
  double lp_margin = std::numeric_limits<double>::infinity();
  std::string witness;
};

// Twenty geometric points spanning [0.05, 5], rounded to denominator 10^6 so
// set membership M > eps stays an exact comparison.
inline std::vector<Rational> epsilon_grid() {
  std::vector<Rational> out;
  out.reserve(20);
  for (int i = 0; i < 20; ++i) {
    double e = 0.05 * std::pow(100.0, static_cast<double>(i) / 19.0);
    out.emplace_back(static_cast<std::int64_t>(std::llround(e * 1e6)), 1000000);
  }
  return out;
}

inline MaximalAudit audit_maximal(const FiniteModel& model, const std::vector<Rational>& u,
                                  const std::vector<Rational>& v, int T,
                                  const std::vector<double>& p_values = {1.5, 2.0, 4.0},
                                  double lp_slack = 1e-12) {
  MaximalAudit out;
  const int size = model.size();
  FiniteModelSeq seq{&model};

  std::vector<Rational> maximal;
  maximal.reserve(static_cast<std::size_t>(size));
  for (int b = 0; b < size; ++b) {
    auto series = ratio_series<Rational>(seq, [&](int& p) { return u[static_cast<std::size_t>(p)]; },
                                         [&](int& p) { return v[static_cast<std::size_t>(p)]; }, b, 1, T);
    Rational m = series.front().ratio();
    for (const auto& pt : series) {
      Rational r = pt.ratio();
      if (r > m) m = r;
    }
    maximal.push_back(m);
  }

  Rational total_u(0);
  for (int b = 0; b < size; ++b)
    total_u = total_u + u[static_cast<std::size_t>(b)] * model.weight[static_cast<std::size_t>(b)];

  for (const Rational& eps : epsilon_grid()) {
    Rational lhs(0), hit_u(0);
    for (int b = 0; b < size; ++b) {
      if (maximal[static_cast<std::size_t>(b)] > eps) {
        lhs = lhs + v[static_cast<std::size_t>(b)] * model.weight[static_cast<std::size_t>(b)];
        hit_u = hit_u + u[static_cast<std::size_t>(b)] * model.weight[static_cast<std::size_t>(b)];
      }
    }
    Rational mid = hit_u / eps;
    Rational rhs = total_u / eps;
    double margin = std::min((mid - lhs).to_double(), (rhs - mid).to_double());
    out.weak_margin = std::min(out.weak_margin, margin);
    if (lhs > mid || mid > rhs) {
      out.weak_ok = false;
      if (out.witness.empty()) {
        std::ostringstream os;
        os << "weak bound fails at eps=" << eps.str() << ": lhs=" << lhs.str()
           << " mid=" << mid.str() << " rhs=" << rhs.str();
        out.witness = os.str();
      }
    }
  }

  for (double p : p_values) {
    Accumulator<double> lhs_p, rhs_p;
    for (int b = 0; b < size; ++b) {
      double mass = (v[static_cast<std::size_t>(b)] * model.weight[static_cast<std::size_t>(b)]).to_double();
      lhs_p.add(std::pow(maximal[static_cast<std::size_t>(b)].to_double(), p) * mass);
      double f = (u[static_cast<std::size_t>(b)] / v[static_cast<std::size_t>(b)]).to_double();
      rhs_p.add(std::pow(f, p) * mass);
    }
    double lhs = std::pow(lhs_p.value(), 1.0 / p);
    double rhs = (p / (p - 1.0)) * std::pow(rhs_p.value(), 1.0 / p);
    double margin = rhs - lhs;
    out.lp_margin = std::min(out.lp_margin, margin);
    if (lhs > rhs + lp_slack * std::max(1.0, rhs)) {
      out.lp_ok = false;
      if (out.witness.empty()) {
        std::ostringstream os;
        os << "L^p bound fails at p=" << p << ": lhs=" << lhs << " rhs=" << rhs;
        out.witness = os.str();
      }
    }
  }
  return out;
}

}  // namespace horo
