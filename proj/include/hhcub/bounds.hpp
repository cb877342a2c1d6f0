#pragma once

/*
 * A-priori bounds on |avg(f) - Q(f)| for the lambda-family rule.
 *
 * With F = (2 lambda^2 - 2 lambda + 1)^2, area = (b-a)(d-c) and corner
 * values v of |fxy| (or |fxy|^q):
 *
 *   T5          area/16 * F * mean(v)                 |fxy| co-ordinated convex
 *   T6 (p, q)   area/(4 (p+1)^(2/p)) * F * mean(v)^(1/q)  |fxy|^q convex, q > 1
 *   T6_relaxed  area/4 * F * mean(v)^(1/q)            p-free over-bound of T6
 *   T7 (q)      area/16 * F * mean(v)^(1/q)           |fxy|^q convex, q >= 1
 *
 * The formulas do not check their convexity hypotheses; see verify.hpp.
 * Every bound is computed as area * (coefficient), so mapping the unit
 * square to another rectangle scales it by exactly the area.
 */

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "hhcub/core.hpp"
#include "hhcub/expr.hpp"
#include "hhcub/kernel.hpp"

namespace hhcub {

enum class Theorem { T5, T6, T7, T6Relaxed };

inline const char* to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::T5: return "T5";
    case Theorem::T6: return "T6";
    case Theorem::T7: return "T7";
    case Theorem::T6Relaxed: return "T6_relaxed";
  }
  return "?";
}

struct BoundReport {
  Theorem theorem;
  double value;
  double lambda;
  std::optional<double> p;  // T6, T6_relaxed
  std::optional<double> q;  // T6, T6_relaxed, T7
};

/// (2 lambda^2 - 2 lambda + 1)^2, between 1/4 (lambda = 1/2) and 1 (lambda in {0, 1}).
inline double lambda_factor(const RuleParams& params) noexcept {
  const double g = detail::lambda_quadratic(params.lambda());
  return g * g;
}

/// |fxy|^q at the four corners of r.
inline CornerData corner_data(const Expr& fxy, const Rectangle& r, double q = 1.0) {
  auto at = [&](double x, double y) {
    const double v = std::abs(eval(fxy, x, y));
    return q == 1.0 ? v : std::pow(v, q);
  };
  return {at(r.a(), r.c()), at(r.a(), r.d()), at(r.b(), r.c()), at(r.b(), r.d())};
}

inline BoundReport bound_t5(const CornerData& corners, const Rectangle& r,
                            const RuleParams& params) {
  const double coeff = lambda_factor(params) * corners.mean() / 16.0;
  return {Theorem::T5, r.area() * coeff, params.lambda(), std::nullopt, std::nullopt};
}

inline BoundReport bound_t6(const CornerData& corners_q, const Rectangle& r,
                            const RuleParams& params, const HolderExponents& he) {
  const double p = he.p();
  const double q = he.q();
  const double coeff = lambda_factor(params) * std::pow(corners_q.mean(), 1.0 / q) /
                       (4.0 * std::pow(p + 1.0, 2.0 / p));
  return {Theorem::T6, r.area() * coeff, params.lambda(), p, q};
}

inline BoundReport bound_t6_relaxed(const CornerData& corners_q, const Rectangle& r,
                                    const RuleParams& params, double q) {
  const HolderExponents he = HolderExponents::from_q(q);
  const double coeff = lambda_factor(params) * std::pow(corners_q.mean(), 1.0 / q) / 4.0;
  return {Theorem::T6Relaxed, r.area() * coeff, params.lambda(), he.p(), q};
}

inline BoundReport bound_t7(const CornerData& corners_q, const Rectangle& r,
                            const RuleParams& params, double q) {
  if (!std::isfinite(q) || !(q >= 1.0)) {
    throw Error(ErrorCode::InvalidExponents, "q must be >= 1, got " + std::to_string(q));
  }
  const double coeff = lambda_factor(params) * std::pow(corners_q.mean(), 1.0 / q) / 16.0;
  return {Theorem::T7, r.area() * coeff, params.lambda(), std::nullopt, q};
}

inline constexpr double kDefaultQGrid[] = {1.0, 2.0, 3.0, 5.0};

/// Smallest of T5, T7(q) for q in the grid, and T6(p, q) for q > 1 in the
/// grid. Ties prefer T5, then T7, then T6.
inline BoundReport best_bound(const FunctionModel& f, const Rectangle& r,
                              const RuleParams& params,
                              std::span<const double> q_grid = kDefaultQGrid) {
  BoundReport best = bound_t5(corner_data(f.fxy, r), r, params);
  for (double q : q_grid) {
    const BoundReport t7 = bound_t7(corner_data(f.fxy, r, q), r, params, q);
    if (t7.value < best.value) best = t7;
  }
  for (double q : q_grid) {
    if (!(q > 1.0)) continue;
    const BoundReport t6 =
        bound_t6(corner_data(f.fxy, r, q), r, params, HolderExponents::from_q(q));
    if (t6.value < best.value) best = t6;
  }
  return best;
}

}  // namespace hhcub
