#pragma once

/*
 * The lambda-family cubature rule on a rectangle.
 *
 * For lambda in [0, 1] and a function f with integrable mixed partial,
 *
 *   point_term - line_term + avg(f) = (1/area) int int K(x) M(y) fxy dy dx
 *
 * where point_term weights the centre, the corners and the edge midpoints,
 * and line_term weights the midline and edge averages of f. The rule
 * estimates the average of f as
 *
 *   Q(f) = line_term - point_term,
 *
 * and its error avg(f) - Q(f) is exactly the kernel-weighted integral.
 */

#include <array>
#include <cmath>

#include "hhcub/core.hpp"
#include "hhcub/expr.hpp"
#include "hhcub/kernel.hpp"
#include "hhcub/quadrature.hpp"

namespace hhcub {

/// Weights of the rule for one lambda.
struct RuleWeights {
  double center;            // (1 - lambda)^2 on f(mid, mid)
  double corner_mean;       // lambda^2 on the mean of the four corners
  double edge_midpoint_sum; // lambda (1 - lambda) / 2 on the sum of four edge midpoints
  double midline_average;   // (1 - lambda) on each midline average
  double edge_average;      // lambda / 2 on each edge average

  static RuleWeights for_lambda(const RuleParams& params) noexcept {
    const double l = params.lambda();
    const double m = 1.0 - l;
    return {m * m, l * l, l * m / 2.0, m, l / 2.0};
  }
};

/// One of the nine evaluation points with its weight in point_term.
struct WeightedPoint {
  double x;
  double y;
  double weight;
  double value;
};

/// Averages of f along the two midlines and the four edges.
struct LineAverages {
  Estimate midline_x;  // (1/(b-a)) int f(x, (c+d)/2) dx
  Estimate midline_y;  // (1/(d-c)) int f((a+b)/2, y) dy
  Estimate bottom;     // (1/(b-a)) int f(x, c) dx
  Estimate top;        // (1/(b-a)) int f(x, d) dx
  Estimate left;       // (1/(d-c)) int f(a, y) dy
  Estimate right;      // (1/(d-c)) int f(b, y) dy

  double err_est() const noexcept {
    return midline_x.err_est + midline_y.err_est + bottom.err_est + top.err_est +
           left.err_est + right.err_est;
  }
};

inline LineAverages line_averages(const FunctionModel& f, const Rectangle& r,
                                  const QuadConfig& cfg = {}) {
  auto along_x = [&](double y) {
    Estimate e = integrate_1d([&](double x) { return eval(f.f, x, y); }, r.a(), r.b(), cfg);
    return Estimate{e.value / r.width(), e.err_est / r.width()};
  };
  auto along_y = [&](double x) {
    Estimate e = integrate_1d([&](double y) { return eval(f.f, x, y); }, r.c(), r.d(), cfg);
    return Estimate{e.value / r.height(), e.err_est / r.height()};
  };
  return {along_x(r.mid_y()), along_y(r.mid_x()), along_x(r.c()),
          along_x(r.d()),      along_y(r.a()),     along_y(r.b())};
}

struct RuleBreakdown {
  double point_term;
  double line_term;
  double line_err_est;
  double lambda;
  Rectangle rect;
  /// Centre, corners (a,c) (a,d) (b,c) (b,d), edge midpoints
  /// ((a+b)/2,c) ((a+b)/2,d) (a,(c+d)/2) (b,(c+d)/2). Zero weights are kept.
  std::array<WeightedPoint, 9> points;
  RuleWeights weights;

  double estimate() const noexcept { return line_term - point_term; }
};

namespace detail {

inline std::array<WeightedPoint, 9> rule_points(const FunctionModel& f, const Rectangle& r,
                                                const RuleWeights& w) {
  const double mx = r.mid_x();
  const double my = r.mid_y();
  const double corner = w.corner_mean / 4.0;
  const double edge = w.edge_midpoint_sum;
  auto at = [&](double x, double y, double weight) {
    return WeightedPoint{x, y, weight, eval(f.f, x, y)};
  };
  return {at(mx, my, w.center),   at(r.a(), r.c(), corner), at(r.a(), r.d(), corner),
          at(r.b(), r.c(), corner), at(r.b(), r.d(), corner), at(mx, r.c(), edge),
          at(mx, r.d(), edge),      at(r.a(), my, edge),      at(r.b(), my, edge)};
}

inline double combine_points(const std::array<WeightedPoint, 9>& p, const RuleWeights& w) {
  const double corner_mean = ((p[1].value + p[2].value) + (p[3].value + p[4].value)) / 4.0;
  const double edge_sum = (p[5].value + p[6].value) + (p[7].value + p[8].value);
  return w.center * p[0].value + w.corner_mean * corner_mean + w.edge_midpoint_sum * edge_sum;
}

inline Estimate combine_lines(const LineAverages& l, const RuleWeights& w) {
  const double v = w.midline_average * (l.midline_y.value + l.midline_x.value) +
                   w.edge_average * (l.top.value + l.bottom.value) +
                   w.edge_average * (l.left.value + l.right.value);
  return {v, l.err_est()};
}

}  // namespace detail

/// (1-lambda)^2 f(centre) + lambda^2 (corner mean) + lambda(1-lambda)/2 (edge midpoint sum).
inline double point_term(const FunctionModel& f, const Rectangle& r, const RuleParams& params) {
  const RuleWeights w = RuleWeights::for_lambda(params);
  return detail::combine_points(detail::rule_points(f, r, w), w);
}

inline Estimate line_term_estimate(const FunctionModel& f, const Rectangle& r,
                                   const RuleParams& params, const QuadConfig& cfg = {}) {
  return detail::combine_lines(line_averages(f, r, cfg), RuleWeights::for_lambda(params));
}

/// (1-lambda)(midline averages) + (lambda/2)(edge averages), each average by
/// adaptive quadrature.
inline double line_term(const FunctionModel& f, const Rectangle& r, const RuleParams& params,
                        const QuadConfig& cfg = {}) {
  return line_term_estimate(f, r, params, cfg).value;
}

inline RuleBreakdown rule_breakdown(const FunctionModel& f, const Rectangle& r,
                                    const RuleParams& params, const QuadConfig& cfg = {}) {
  const RuleWeights w = RuleWeights::for_lambda(params);
  const auto points = detail::rule_points(f, r, w);
  const Estimate lines = detail::combine_lines(line_averages(f, r, cfg), w);
  return {detail::combine_points(points, w), lines.value, lines.err_est, params.lambda(),
          r, points, w};
}

/// Q(f) = line_term - point_term, an estimate of (1/area) int int f.
/// err_est covers the line quadratures only; the rule error itself is
/// the kernel-weighted integral.
inline Estimate approximate_integral_estimate(const FunctionModel& f, const Rectangle& r,
                                              const RuleParams& params,
                                              const QuadConfig& cfg = {}) {
  const RuleBreakdown rb = rule_breakdown(f, r, params, cfg);
  return {rb.estimate(), rb.line_err_est};
}

inline double approximate_integral(const FunctionModel& f, const Rectangle& r,
                                   const RuleParams& params, const QuadConfig& cfg = {}) {
  return approximate_integral_estimate(f, r, params, cfg).value;
}

/// Both sides of the identity, each computed independently.
struct IdentityCheck {
  double lhs;       // point_term - line_term + avg(f)
  double rhs;       // kernel-weighted integral
  double residual;  // lhs - rhs
  double err_est;   // combined quadrature estimate for both sides
};

inline IdentityCheck identity_check(const FunctionModel& f, const Rectangle& r,
                                    const RuleParams& params, const QuadConfig& cfg = {}) {
  const RuleBreakdown rb = rule_breakdown(f, r, params, cfg);
  const Estimate total = integrate_2d(f, r, cfg);
  const double avg = total.value / r.area();
  const Estimate kernel = kernel_weighted_integral_estimate(f.fxy, r, params, cfg);
  const double lhs = rb.point_term - rb.line_term + avg;
  return {lhs, kernel.value, lhs - kernel.value,
          rb.line_err_est + total.err_est / r.area() + kernel.err_est};
}

inline double identity_residual(const FunctionModel& f, const Rectangle& r,
                                const RuleParams& params, const QuadConfig& cfg = {}) {
  return identity_check(f, r, params, cfg).residual;
}

}  // namespace hhcub
