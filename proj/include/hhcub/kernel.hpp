#pragma once

// Piecewise-linear kernels K(x), M(y) of the lambda-family identity.
//
//   K(x) = x - (a + lambda (b-a)/2)   on [a, (a+b)/2]
//   K(x) = x - (b - lambda (b-a)/2)   on ((a+b)/2, b]
//
// M(y) is the same construction on [c, d]. At the midpoint the left branch
// applies. The jump there is -(1 - lambda)(b - a).

#include <string>

#include "hhcub/core.hpp"

namespace hhcub {

namespace detail {

inline double kernel_left(double t, double lo, double hi, double lambda) noexcept {
  return t - (lo + lambda * (hi - lo) / 2.0);
}

inline double kernel_right(double t, double lo, double hi, double lambda) noexcept {
  return t - (hi - lambda * (hi - lo) / 2.0);
}

inline double kernel_1d(double t, double lo, double hi, double lambda, const char* axis) {
  if (!(t >= lo && t <= hi)) {
    throw Error(ErrorCode::OutOfDomain, std::string(axis) + "=" + std::to_string(t) +
                                            " outside [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
  }
  return t <= 0.5 * (lo + hi) ? kernel_left(t, lo, hi, lambda)
                              : kernel_right(t, lo, hi, lambda);
}

/// 2 lambda^2 - 2 lambda + 1, written in a form symmetric under lambda -> 1 - lambda.
inline double lambda_quadratic(double lambda) noexcept {
  const double u = lambda - 0.5;
  return 2.0 * (u * u) + 0.5;
}

}  // namespace detail

inline double kernel_K(double x, const Rectangle& r, const RuleParams& params) {
  return detail::kernel_1d(x, r.a(), r.b(), params.lambda(), "x");
}

inline double kernel_M(double y, const Rectangle& r, const RuleParams& params) {
  return detail::kernel_1d(y, r.c(), r.d(), params.lambda(), "y");
}

/// Closed form of the integral of |K| over [a, b]: (b-a)^2 (2 lambda^2 - 2 lambda + 1) / 4.
inline double kernel_abs_integral_x(const Rectangle& r, const RuleParams& params) noexcept {
  return r.width() * r.width() * detail::lambda_quadratic(params.lambda()) / 4.0;
}

/// Closed form of the integral of |M| over [c, d].
inline double kernel_abs_integral_y(const Rectangle& r, const RuleParams& params) noexcept {
  return r.height() * r.height() * detail::lambda_quadratic(params.lambda()) / 4.0;
}

/// (1/area) * (int |K|)(int |M|) = area (2 lambda^2 - 2 lambda + 1)^2 / 16.
inline double kernel_abs_mass(const Rectangle& r, const RuleParams& params) noexcept {
  const double g = detail::lambda_quadratic(params.lambda());
  return r.area() * (g * g / 16.0);
}

}  // namespace hhcub
