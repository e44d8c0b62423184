#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/actions.hpp"
#include "horo/boundary.hpp"
#include "horo/rational.hpp"
#include "horo/word.hpp"

namespace horo::harness {

// Exact parse of "3", "-2/7" or "0.25" into a rational.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::runtime_error("empty number");
  auto parse_int = [](const std::string& s) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string::npos)
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(parse_int(digits), den);
  }
  return Rational(parse_int(text));
}

// A finite combination of cylinder indicators on the boundary, written as
// comma-separated "prefix:coeff" terms; prefix "e" is the constant term.
// Example: "a1:1, a2.a1:-1/2" evaluates 1 on [a1], -1/2 on [a2 a1].
class BoundaryFunction {
public:
  static BoundaryFunction parse(const std::string& spec, int rank) {
    BoundaryFunction f;
    f.rank_ = rank;
    std::size_t pos = 0;
    while (pos != std::string::npos && pos < spec.size()) {
      auto comma = spec.find(',', pos);
      std::string item = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
      pos = comma == std::string::npos ? comma : comma + 1;
      auto a = item.find_first_not_of(" \t");
      if (a == std::string::npos) continue;
      auto b = item.find_last_not_of(" \t");
      item = item.substr(a, b - a + 1);
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("boundary function: term '" + item + "' is not prefix:coeff");
      std::string prefix_text = item.substr(0, colon);
      Term t;
      t.coeff = parse_rational(item.substr(colon + 1));
      ReducedWord w = ReducedWord::parse(prefix_text, rank);
      t.prefix = w.letters();
      // A cylinder address must be given in reduced form; parsing cancels
      // silently, so compare the token count against the reduced length.
      int tokens = 0;
      if (prefix_text != "e" && !prefix_text.empty()) {
        tokens = 1;
        for (char c : prefix_text) tokens += c == '.' ? 1 : 0;
      }
      if (tokens != w.length())
        throw std::runtime_error("boundary function: prefix '" + prefix_text + "' is not reduced");
      f.terms_.push_back(std::move(t));
    }
    if (f.terms_.empty()) throw std::runtime_error("boundary function: no terms in '" + spec + "'");
    return f;
  }

  double eval(BoundaryPoint& b) const { return eval_exact(b).to_double(); }

  Rational eval_exact(BoundaryPoint& b) const {
    Rational out(0);
    for (const auto& t : terms_) {
      bool hit = true;
      for (std::size_t i = 0; i < t.prefix.size() && hit; ++i)
        hit = b.at(static_cast<int>(i) + 1) == t.prefix[i];
      if (hit) out = out + t.coeff;
    }
    return out;
  }

  // Integral against the boundary measure: each term contributes its
  // coefficient times the measure of its cylinder.
  Rational integral() const {
    Rational out(0);
    for (const auto& t : terms_)
      out = out + t.coeff * (t.prefix.empty() ? Rational(1)
                                              : cylinder_measure(Cylinder(rank_, t.prefix)));
    return out;
  }

  int max_depth() const {
    std::size_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.prefix.size());
    return static_cast<int>(d);
  }

private:
  struct Term {
    std::vector<Letter> prefix;
    Rational coeff{0};
  };

  int rank_;
  std::vector<Term> terms_;
};

// The fiber-side factor of a skewed test function:
//   none        -> identically 1
//   const:c     -> the constant c
//   cap:f       -> indicator of the polar cap of normalized area f (sphere)
//   bump:r0:r1  -> indicator of the annulus r0 <= |x| <= r1 (plane)
class FiberFactor {
public:
  enum class Kind { none, constant, cap, bump };

  static FiberFactor parse(const std::string& spec) {
    FiberFactor f;
    if (spec == "none" || spec.empty()) {
      f.kind_ = Kind::none;
      return f;
    }
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    if (head == "const") {
      if (colon == std::string::npos) throw std::runtime_error("xfactor: const needs a value");
      f.kind_ = Kind::constant;
      f.c_ = std::stod(spec.substr(colon + 1));
      return f;
    }
    if (head == "cap") {
      if (colon == std::string::npos) throw std::runtime_error("xfactor: cap needs a fraction");
      f.kind_ = Kind::cap;
      f.c_ = std::stod(spec.substr(colon + 1));
      if (f.c_ <= 0.0 || f.c_ >= 1.0) throw std::runtime_error("xfactor: cap fraction must be in (0,1)");
      return f;
    }
    if (head == "bump") {
      auto second = spec.find(':', colon + 1);
      if (colon == std::string::npos || second == std::string::npos)
        throw std::runtime_error("xfactor: bump needs two radii");
      f.kind_ = Kind::bump;
      f.r0_ = std::stod(spec.substr(colon + 1, second - colon - 1));
      f.r1_ = std::stod(spec.substr(second + 1));
      if (!(0.0 <= f.r0_ && f.r0_ < f.r1_)) throw std::runtime_error("xfactor: need 0 <= r0 < r1");
      return f;
    }
    throw std::runtime_error("xfactor: unknown kind '" + spec + "'");
  }

  Kind kind() const { return kind_; }

  double eval(const ActionPoint& x) const {
    switch (kind_) {
      case Kind::none: return 1.0;
      case Kind::constant: return c_;
      case Kind::cap: {
        // Normalized spherical area f of the cap corresponds to the height
        // cut z >= 1 - 2f.
        const Vec3& v = std::get<Vec3>(x);
        return v.z >= 1.0 - 2.0 * c_ ? 1.0 : 0.0;
      }
      case Kind::bump: {
        const Vec2& v = std::get<Vec2>(x);
        double r = std::hypot(v.x, v.y);
        return (r >= r0_ && r <= r1_) ? 1.0 : 0.0;
      }
    }
    return 1.0;
  }

  // Integral against the action's reference measure, when it has a closed
  // form: probability references integrate none/const directly, the cap's
  // area fraction is its parameter, and the annulus has its Lebesgue area.
  std::optional<double> integral(const std::string& action_name) const {
    bool probability = action_name == "none" || action_name == "trivial" ||
                       action_name == "so3_sphere" || action_name == "boundary_pair";
    switch (kind_) {
      case Kind::none: return probability ? std::optional<double>(1.0) : std::nullopt;
      case Kind::constant: return probability ? std::optional<double>(c_) : std::nullopt;
      case Kind::cap: return action_name == "so3_sphere" ? std::optional<double>(c_) : std::nullopt;
      case Kind::bump:
        return action_name == "sanov_plane"
                   ? std::optional<double>(std::numbers::pi * (r1_ * r1_ - r0_ * r0_))
                   : std::nullopt;
    }
    return std::nullopt;
  }

private:
  Kind kind_ = Kind::none;
  double c_ = 1.0, r0_ = 0.0, r1_ = 0.0;
};

}  // namespace horo::harness
