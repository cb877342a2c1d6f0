#pragma once

// Hypothesis checks: co-ordinated convexity on a grid, and the
// Hadamard-type chain of five averages for co-ordinated convex functions.

#include <cmath>
#include <optional>
#include <vector>

#include "hhcub/core.hpp"
#include "hhcub/cubature.hpp"
#include "hhcub/expr.hpp"
#include "hhcub/quadrature.hpp"

namespace hhcub {

enum class Axis { X, Y };

inline const char* to_string(Axis a) noexcept { return a == Axis::X ? "x" : "y"; }

/// First midpoint-convexity violation found. For axis X the mapping is
/// u -> g(u, fixed_coord); for axis Y it is v -> g(fixed_coord, v).
struct ConvexityWitness {
  Axis axis;
  double fixed_coord;
  double t1;
  double t2;
  double violation;  // g(mid) - (g(t1) + g(t2)) / 2
};

struct ConvexityReport {
  bool passed;
  std::optional<ConvexityWitness> witness;
  int grid_n;
};

inline constexpr int kDefaultConvexityGrid = 33;
inline constexpr double kDefaultConvexityTol = 1e-10;

namespace detail {

inline std::vector<double> lattice(double lo, double hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[i] = lo + (hi - lo) * i / (n - 1);
  t.back() = hi;
  return t;
}

}  // namespace detail

/// Checks g((t1+t2)/2) <= (g(t1)+g(t2))/2 + tol along both axes over a
/// grid_n lattice. The witness is the lexicographically smallest
/// violation by (axis, fixed_coord, t1, t2).
template <typename G>
ConvexityReport is_coordinate_convex(const G& g, const Rectangle& r,
                                     int grid_n = kDefaultConvexityGrid,
                                     double tol = kDefaultConvexityTol) {
  if (grid_n < 3) throw Error(ErrorCode::InvalidConfig, "grid_n must be >= 3");
  const std::vector<double> xs = detail::lattice(r.a(), r.b(), grid_n);
  const std::vector<double> ys = detail::lattice(r.c(), r.d(), grid_n);

  for (Axis axis : {Axis::X, Axis::Y}) {
    const std::vector<double>& fixed = axis == Axis::X ? ys : xs;
    const std::vector<double>& moving = axis == Axis::X ? xs : ys;
    auto at = [&](double t, double s) {
      return axis == Axis::X ? static_cast<double>(g(t, s)) : static_cast<double>(g(s, t));
    };
    std::vector<double> values(moving.size());
    for (double s : fixed) {
      for (std::size_t i = 0; i < moving.size(); ++i) values[i] = at(moving[i], s);
      for (std::size_t i = 0; i < moving.size(); ++i) {
        for (std::size_t j = i + 1; j < moving.size(); ++j) {
          const double mid = 0.5 * (moving[i] + moving[j]);
          const double excess = at(mid, s) - 0.5 * (values[i] + values[j]);
          if (excess > tol) {
            return {false, ConvexityWitness{axis, s, moving[i], moving[j], excess}, grid_n};
          }
        }
      }
    }
  }
  return {true, std::nullopt, grid_n};
}

inline ConvexityReport is_coordinate_convex(const Expr& g, const Rectangle& r,
                                            int grid_n = kDefaultConvexityGrid,
                                            double tol = kDefaultConvexityTol) {
  return is_coordinate_convex([&](double x, double y) { return eval(g, x, y); }, r, grid_n, tol);
}

/// Convexity of |fxy|^q, the hypothesis of the bounds.
inline ConvexityReport is_abs_mixed_power_convex(const Expr& fxy, const Rectangle& r, double q,
                                                 int grid_n = kDefaultConvexityGrid,
                                                 double tol = kDefaultConvexityTol) {
  return is_coordinate_convex(
      [&](double x, double y) {
        const double v = std::abs(eval(fxy, x, y));
        return q == 1.0 ? v : std::pow(v, q);
      },
      r, grid_n, tol);
}

/// The five averages, in order: centre value, half-sum of midline averages,
/// double-integral average, quarter-sum of edge averages, corner mean.
struct HadamardChain {
  double v1;
  double v2;
  double v3;
  double v4;
  double v5;
  double err_est;

  /// v1 <= v2 <= ... <= v5 up to `slack`.
  bool is_monotone(double slack) const noexcept {
    return v1 <= v2 + slack && v2 <= v3 + slack && v3 <= v4 + slack && v4 <= v5 + slack;
  }
};

inline HadamardChain hadamard_chain(const FunctionModel& f, const Rectangle& r,
                                    const QuadConfig& cfg = {}) {
  const LineAverages lines = line_averages(f, r, cfg);
  const Estimate total = integrate_2d(f, r, cfg);
  const double v1 = eval(f.f, r.mid_x(), r.mid_y());
  const double v2 = 0.5 * (lines.midline_x.value + lines.midline_y.value);
  const double v3 = total.value / r.area();
  const double v4 = 0.25 * ((lines.bottom.value + lines.top.value) +
                            (lines.left.value + lines.right.value));
  const double v5 = 0.25 * ((eval(f.f, r.a(), r.c()) + eval(f.f, r.a(), r.d())) +
                            (eval(f.f, r.b(), r.c()) + eval(f.f, r.b(), r.d())));
  return {v1, v2, v3, v4, v5, lines.err_est() + total.err_est / r.area()};
}

}  // namespace hhcub
