#pragma once

/*
 * Reference integration.
 *
 * One-dimensional integrals use globally adaptive bisection with a fixed
 * Gauss-Legendre rule per panel. Each panel is integrated with n and 2n
 * nodes; the 2n result is kept and |Q_n - Q_2n| is the panel error
 * estimate. The panel with the largest estimate is split until the summed
 * estimate meets max(abs_tol, rel_tol |value|).
 *
 * A panel whose estimate is already at rounding level (below a small
 * multiple of eps * int |g|) is never split further; its estimate is still
 * reported, so a returned err_est can exceed the tolerance only when the
 * request is below what double precision can resolve.
 *
 * Two-dimensional integrals are tensorised: adaptive in x outside, adaptive
 * in y inside with tolerances tightened by a factor of 10.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "hhcub/core.hpp"
#include "hhcub/expr.hpp"
#include "hhcub/gauss_tables.hpp"
#include "hhcub/kernel.hpp"

namespace hhcub {

struct QuadConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_depth = 40;
  int nodes_per_panel = 16;

  void validate() const {
    if (!(abs_tol >= 1e-14) || !std::isfinite(abs_tol)) {
      throw Error(ErrorCode::InvalidConfig, "abs_tol must be >= 1e-14");
    }
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
      throw Error(ErrorCode::InvalidConfig, "rel_tol must be > 0");
    }
    if (max_depth < 1 || max_depth > 60) {
      throw Error(ErrorCode::InvalidConfig, "max_depth must lie in [1, 60]");
    }
    if (nodes_per_panel != 8 && nodes_per_panel != 16 && nodes_per_panel != 32) {
      throw Error(ErrorCode::InvalidConfig, "nodes_per_panel must be 8, 16 or 32");
    }
  }

  /// Same depth and order, tolerances divided by `factor`. The result may
  /// sit below the public abs_tol floor; it is for internal use.
  QuadConfig tightened(double factor) const {
    QuadConfig out = *this;
    out.abs_tol = abs_tol / factor;
    out.rel_tol = rel_tol / factor;
    return out;
  }
};

/// A value with its estimated absolute error.
struct Estimate {
  double value = 0.0;
  double err_est = 0.0;
};

class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(double best_value, double achieved)
      : Error(ErrorCode::ToleranceNotMet,
              "max_depth reached; best value " + std::to_string(best_value) +
                  " with error estimate " + std::to_string(achieved)),
        best_value_(best_value),
        achieved_(achieved) {}

  double best_value() const noexcept { return best_value_; }
  double achieved() const noexcept { return achieved_; }

 private:
  double best_value_;
  double achieved_;
};

namespace detail {

struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

inline GaussRule gauss_rule(int n) {
  switch (n) {
    case 8: return {gauss::kNodes8, gauss::kWeights8};
    case 16: return {gauss::kNodes16, gauss::kWeights16};
    case 32: return {gauss::kNodes32, gauss::kWeights32};
    case 64: return {gauss::kNodes64, gauss::kWeights64};
    default: throw Error(ErrorCode::InvalidConfig, "no Gauss-Legendre table for n=" + std::to_string(n));
  }
}

struct PanelSums {
  double value;
  double l1;
};

template <typename G>
PanelSums apply_rule(const G& g, double lo, double hi, const GaussRule& rule) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  // Neumaier-compensated so that constants integrate to the last bit.
  double sum = 0.0;
  double comp = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double dx = half * rule.nodes[i];
    const double gl = static_cast<double>(g(mid - dx));
    const double gr = static_cast<double>(g(mid + dx));
    for (const double term : {rule.weights[i] * gl, rule.weights[i] * gr}) {
      const double t = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
    l1 += rule.weights[i] * (std::abs(gl) + std::abs(gr));
  }
  return {(sum + comp) * half, l1 * half};
}

struct Panel1d {
  double lo;
  double hi;
  double value;
  double err;
  int depth;
};

struct ByError {
  bool operator()(const Panel1d& l, const Panel1d& r) const noexcept {
    if (l.err != r.err) return l.err < r.err;
    return l.lo > r.lo;
  }
};

template <typename G>
Estimate integrate_1d_raw(const G& g, double lo, double hi, double abs_tol, double rel_tol,
                          int max_depth, int nodes) {
  if (lo == hi) return {0.0, 0.0};
  const GaussRule low = gauss_rule(nodes);
  const GaussRule high = gauss_rule(2 * nodes);
  constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

  std::priority_queue<Panel1d, std::vector<Panel1d>, ByError> open;
  std::vector<Panel1d> settled;
  double total = 0.0;
  double total_err = 0.0;

  auto make = [&](double a, double b, int depth) {
    const PanelSums qn = apply_rule(g, a, b, low);
    const PanelSums q2n = apply_rule(g, a, b, high);
    Panel1d p{a, b, q2n.value, std::abs(qn.value - q2n.value), depth};
    total += p.value;
    total_err += p.err;
    if (p.err <= kRoundoff * q2n.l1) {
      settled.push_back(p);
    } else {
      open.push(p);
    }
  };

  make(lo, hi, 0);
  while (!open.empty() && total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    const Panel1d worst = open.top();
    if (worst.depth >= max_depth) {
      throw ToleranceNotMet(total, total_err);
    }
    open.pop();
    total -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.lo + worst.hi);
    make(worst.lo, mid, worst.depth + 1);
    make(mid, worst.hi, worst.depth + 1);
  }

  // Deterministic final summation in left-to-right panel order.
  while (!open.empty()) {
    settled.push_back(open.top());
    open.pop();
  }
  std::sort(settled.begin(), settled.end(),
            [](const Panel1d& l, const Panel1d& r) { return l.lo < r.lo; });
  Estimate out;
  for (const Panel1d& p : settled) {
    out.value += p.value;
    out.err_est += p.err;
  }
  return out;
}

template <typename F>
Estimate integrate_2d_raw(const F& f, double a, double b, double c, double d,
                          const QuadConfig& cfg) {
  const double inner_abs = cfg.abs_tol / (10.0 * std::max(1.0, b - a));
  const double inner_rel = cfg.rel_tol / 10.0;
  double max_inner_err = 0.0;
  auto slice = [&](double x) {
    const Estimate inner = integrate_1d_raw([&](double y) { return f(x, y); }, c, d, inner_abs,
                                            inner_rel, cfg.max_depth, cfg.nodes_per_panel);
    max_inner_err = std::max(max_inner_err, inner.err_est);
    return inner.value;
  };
  Estimate outer = integrate_1d_raw(slice, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_depth,
                                    cfg.nodes_per_panel);
  outer.err_est += (b - a) * max_inner_err;
  return outer;
}

}  // namespace detail

/// Adaptive integral of a univariate callable over [lo, hi].
template <typename G>
Estimate integrate_1d(const G& g, double lo, double hi, const QuadConfig& cfg = {}) {
  cfg.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCode::DegenerateRectangle, "integrate_1d needs finite lo < hi");
  }
  return detail::integrate_1d_raw(g, lo, hi, cfg.abs_tol, cfg.rel_tol, cfg.max_depth,
                                  cfg.nodes_per_panel);
}

/// Adaptive double integral of a bivariate callable f(x, y) over r.
template <typename F>
Estimate integrate_2d(const F& f, const Rectangle& r, const QuadConfig& cfg = {}) {
  cfg.validate();
  return detail::integrate_2d_raw(f, r.a(), r.b(), r.c(), r.d(), cfg);
}

inline Estimate integrate_2d(const FunctionModel& f, const Rectangle& r,
                             const QuadConfig& cfg = {}) {
  return integrate_2d([&](double x, double y) { return eval(f.f, x, y); }, r, cfg);
}

/// (1/area) * double integral of K(x) M(y) fxy(x, y), computed on the four
/// quadrants so every kernel branch is linear on its panel.
inline Estimate kernel_weighted_integral_estimate(const Expr& fxy, const Rectangle& r,
                                                  const RuleParams& params,
                                                  const QuadConfig& cfg = {}) {
  cfg.validate();
  const double lambda = params.lambda();
  const double mx = r.mid_x();
  const double my = r.mid_y();
  Estimate total;
  for (int ix = 0; ix < 2; ++ix) {
    for (int iy = 0; iy < 2; ++iy) {
      const double x0 = ix == 0 ? r.a() : mx;
      const double x1 = ix == 0 ? mx : r.b();
      const double y0 = iy == 0 ? r.c() : my;
      const double y1 = iy == 0 ? my : r.d();
      auto integrand = [&](double x, double y) {
        const double k = ix == 0 ? detail::kernel_left(x, r.a(), r.b(), lambda)
                                 : detail::kernel_right(x, r.a(), r.b(), lambda);
        const double m = iy == 0 ? detail::kernel_left(y, r.c(), r.d(), lambda)
                                 : detail::kernel_right(y, r.c(), r.d(), lambda);
        return k * m * eval(fxy, x, y);
      };
      const Estimate part = detail::integrate_2d_raw(integrand, x0, x1, y0, y1, cfg);
      total.value += part.value;
      total.err_est += part.err_est;
    }
  }
  const double area = r.area();
  return {total.value / area, total.err_est / area};
}

inline double kernel_weighted_integral(const Expr& fxy, const Rectangle& r,
                                       const RuleParams& params, const QuadConfig& cfg = {}) {
  return kernel_weighted_integral_estimate(fxy, r, params, cfg).value;
}

}  // namespace hhcub
