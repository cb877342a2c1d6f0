#pragma once

// Shared generators and independent oracles for the test suites.

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hhcub/expr.hpp"

namespace hhcub::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

/// Smooth trees (no abs, every log/sqrt/division argument bounded away
/// from its singularity) for derivative properties.
inline Expr random_smooth(Rng& rng, int depth) {
  if (depth <= 0 || pick(rng, 5) == 0) {
    switch (pick(rng, 3)) {
      case 0: return Expr::x();
      case 1: return Expr::y();
      default: return Expr::number(std::round(uniform(rng, 0.1, 3.0) * 100.0) / 100.0);
    }
  }
  const Expr u = random_smooth(rng, depth - 1);
  switch (pick(rng, 12)) {
    case 0: return Expr::add(u, random_smooth(rng, depth - 1));
    case 1: return Expr::sub(u, random_smooth(rng, depth - 1));
    case 2:
    case 3: return Expr::mul(u, random_smooth(rng, depth - 1));
    case 4: return Expr::call(Func::Sin, u);
    case 5: return Expr::call(Func::Cos, u);
    case 6: return Expr::call(Func::Exp, Expr::mul(Expr::number(0.5), u));
    case 7:
      return Expr::call(Func::Log, Expr::add(Expr::number(2.0), Expr::call(Func::Sin, u)));
    case 8:
      return Expr::call(Func::Sqrt,
                        Expr::add(Expr::number(1.0), Expr::pow(u, Expr::number(2.0))));
    case 9:
      return Expr::div(u, Expr::add(Expr::number(2.0),
                                    Expr::call(Func::Cos, random_smooth(rng, depth - 1))));
    case 10: return Expr::pow(u, Expr::number(static_cast<double>(2 + pick(rng, 2))));
    default: return Expr::neg(u);
  }
}

/// Smooth trees in a single variable.
inline Expr random_univariate(Rng& rng, Var v, int depth) {
  if (depth <= 0 || pick(rng, 4) == 0) {
    if (pick(rng, 3) == 0) return Expr::number(std::round(uniform(rng, 0.1, 3.0) * 100.0) / 100.0);
    return v == Var::X ? Expr::x() : Expr::y();
  }
  const Expr u = random_univariate(rng, v, depth - 1);
  switch (pick(rng, 8)) {
    case 0: return Expr::add(u, random_univariate(rng, v, depth - 1));
    case 1: return Expr::mul(u, random_univariate(rng, v, depth - 1));
    case 2: return Expr::call(Func::Sin, u);
    case 3: return Expr::call(Func::Cos, u);
    case 4: return Expr::call(Func::Exp, Expr::call(Func::Sin, u));
    case 5: return Expr::pow(u, Expr::number(2.0));
    case 6: return Expr::call(Func::Sqrt, Expr::add(Expr::number(1.0), Expr::pow(u, Expr::number(2.0))));
    default: return Expr::neg(u);
  }
}

/// Arbitrary well-formed trees over the full grammar, literals non-negative.
inline Expr random_any(Rng& rng, int depth) {
  if (depth <= 0 || pick(rng, 6) == 0) {
    switch (pick(rng, 6)) {
      case 0: return Expr::x();
      case 1: return Expr::y();
      case 2: return Expr::pi();
      case 3: return Expr::e();
      case 4: return Expr::number(static_cast<double>(pick(rng, 20)));
      default: return Expr::number(uniform(rng, 0.0, 1e4) * std::pow(10.0, -pick(rng, 12)));
    }
  }
  const Expr u = random_any(rng, depth - 1);
  switch (pick(rng, 11)) {
    case 0: return Expr::add(u, random_any(rng, depth - 1));
    case 1: return Expr::sub(u, random_any(rng, depth - 1));
    case 2: return Expr::mul(u, random_any(rng, depth - 1));
    case 3: return Expr::div(u, random_any(rng, depth - 1));
    case 4: return Expr::neg(u);
    case 5: return Expr::call(static_cast<Func>(pick(rng, 6)), u);
    case 6: return Expr::pow(u, Expr::number(static_cast<double>(pick(rng, 5))));
    case 7: return Expr::pow(Expr::call(Func::Exp, u), random_any(rng, depth - 1));
    case 8: return Expr::pow(Expr::number(uniform(rng, 0.5, 3.0)), u);
    case 9: return Expr::pow(Expr::e(), Expr::neg(u));
    default: return Expr::pow(Expr::call(Func::Sqrt, u), Expr::number(0.5));
  }
}

/// Cross-difference stencil for the mixed partial, evaluated in long double
/// so rounding stays far below the O(h^2) truncation error.
inline long double fd_mixed(const Expr& f, double x, double y, double h = 1e-4) {
  const long double X = x;
  const long double Y = y;
  const long double H = h;
  auto g = [&](long double a, long double b) { return eval<long double>(f, a, b); };
  return (g(X + H, Y + H) - g(X + H, Y - H) - g(X - H, Y + H) + g(X - H, Y - H)) / (4 * H * H);
}

inline std::optional<double> try_eval(const Expr& e, double x, double y) {
  try {
    return eval(e, x, y);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

/// Hand-picked smooth corpus: polynomials up to degree 6 plus exp, sin and
/// cos composites.
inline const std::vector<std::string>& smooth_corpus() {
  static const std::vector<std::string> corpus = {
      "x*y",
      "x^2*y^2",
      "x^3*y^3",
      "x^2 + y^2",
      "x^6 - 2*x^3*y^3 + y^6",
      "x^4*y^2 + 3*x*y^5",
      "(x + 2*y)^6 / 100",
      "x^5*y - x*y^5 + 7",
      "1 + x - y + x*y - x^2*y^2",
      "exp(x + y)",
      "exp(x*y)",
      "exp(-x^2 - y^2)",
      "sin(x)*cos(y)",
      "sin(x + 2*y)",
      "cos(x*y)",
      "sin(x)*sin(y) + cos(x)*cos(y)",
      "exp(x)*sin(y)",
      "x*exp(y/2) + y*exp(x/3)",
      "cos(x)^2*exp(y)",
      "sin(3*x)*cos(2*y) + x^3",
      "exp(sin(x*y))",
      "x^2*cos(y) - y^3*sin(x)",
  };
  return corpus;
}

}  // namespace hhcub::testing
