#pragma once

// Domain value types shared by every module, plus the error hierarchy.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hhcub {

// ----------------------------------------------------------------------------
// Errors
// ----------------------------------------------------------------------------

enum class ErrorCode {
  DegenerateRectangle,
  NonFinite,
  InvalidLambda,
  InvalidExponents,
  NegativeCorner,
  OutOfDomain,
  InvalidConfig,
  SyntaxError,
  UnknownIdentifier,
  NotDifferentiable,
  DomainError,
  ToleranceNotMet,
  BudgetExhausted,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateRectangle: return "DegenerateRectangle";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::InvalidExponents: return "InvalidExponents";
    case ErrorCode::NegativeCorner: return "NegativeCorner";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::NotDifferentiable: return "NotDifferentiable";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
  }
  return "Unknown";
}

/// Base of every exception thrown by the library. `what()` is prefixed with
/// the error code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ----------------------------------------------------------------------------
// Rectangle
// ----------------------------------------------------------------------------

/// Closed axis-aligned rectangle [a,b] x [c,d] with a < b, c < d, all finite.
class Rectangle {
 public:
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  double width() const noexcept { return b_ - a_; }
  double height() const noexcept { return d_ - c_; }
  double area() const noexcept { return (b_ - a_) * (d_ - c_); }
  double mid_x() const noexcept { return 0.5 * (a_ + b_); }
  double mid_y() const noexcept { return 0.5 * (c_ + d_); }

  bool contains(double x, double y) const noexcept {
    return x >= a_ && x <= b_ && y >= c_ && y <= d_;
  }

  /// The four quadrants split at the midlines, ordered (lower-left,
  /// upper-left, lower-right, upper-right), i.e. lexicographic by (x, y).
  std::array<Rectangle, 4> quadrants() const noexcept {
    const double mx = mid_x();
    const double my = mid_y();
    return {Rectangle(a_, mx, c_, my), Rectangle(a_, mx, my, d_),
            Rectangle(mx, b_, c_, my), Rectangle(mx, b_, my, d_)};
  }

  friend bool operator==(const Rectangle&, const Rectangle&) = default;

  friend Rectangle validate_rectangle(double a, double b, double c, double d);

 private:
  Rectangle(double a, double b, double c, double d) noexcept
      : a_(a), b_(b), c_(c), d_(d) {}

  double a_;
  double b_;
  double c_;
  double d_;
};

inline Rectangle validate_rectangle(double a, double b, double c, double d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(d)) {
    throw Error(ErrorCode::NonFinite, "rectangle bounds must be finite");
  }
  if (!(a < b)) {
    throw Error(ErrorCode::DegenerateRectangle,
                "need a < b, got a=" + std::to_string(a) +
                    " b=" + std::to_string(b));
  }
  if (!(c < d)) {
    throw Error(ErrorCode::DegenerateRectangle,
                "need c < d, got c=" + std::to_string(c) +
                    " d=" + std::to_string(d));
  }
  return Rectangle(a, b, c, d);
}

inline Rectangle unit_square() { return validate_rectangle(0.0, 1.0, 0.0, 1.0); }

// ----------------------------------------------------------------------------
// RuleParams
// ----------------------------------------------------------------------------

/// The rule parameter lambda in [0, 1]: 0 is midpoint-type, 1/3
/// Simpson-type, 1 trapezoid-type.
class RuleParams {
 public:
  explicit RuleParams(double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0) {
      throw Error(ErrorCode::InvalidLambda,
                  "lambda must lie in [0, 1], got " + std::to_string(lambda));
    }
  }

  static RuleParams midpoint() { return RuleParams(0.0); }
  static RuleParams simpson() { return RuleParams(1.0 / 3.0); }
  static RuleParams trapezoid() { return RuleParams(1.0); }

  double lambda() const noexcept { return lambda_; }

  friend bool operator==(const RuleParams&, const RuleParams&) = default;

 private:
  double lambda_;
};

// ----------------------------------------------------------------------------
// HolderExponents
// ----------------------------------------------------------------------------

/// Conjugate pair 1/p + 1/q = 1 with p, q > 1. q is the primary exponent.
class HolderExponents {
 public:
  HolderExponents(double p, double q) : p_(p), q_(q) {
    if (!std::isfinite(p) || !std::isfinite(q) || !(p > 1.0) || !(q > 1.0)) {
      throw Error(ErrorCode::InvalidExponents,
                  "need p > 1 and q > 1, got p=" + std::to_string(p) +
                      " q=" + std::to_string(q));
    }
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidExponents,
                  "p and q are not conjugate: 1/p + 1/q = " +
                      std::to_string(1.0 / p + 1.0 / q));
    }
  }

  static HolderExponents from_q(double q) {
    if (!std::isfinite(q) || !(q > 1.0)) {
      throw Error(ErrorCode::InvalidExponents,
                  "q must be > 1, got " + std::to_string(q));
    }
    return HolderExponents(q / (q - 1.0), q);
  }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  double p_;
  double q_;
};

// ----------------------------------------------------------------------------
// CornerData
// ----------------------------------------------------------------------------

/// Non-negative values at the corners (a,c), (a,d), (b,c), (b,d).
class CornerData {
 public:
  CornerData(double v_ac, double v_ad, double v_bc, double v_bd)
      : v_{v_ac, v_ad, v_bc, v_bd} {
    for (double v : v_) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite, "corner value is not finite");
      }
      if (v < 0.0) {
        throw Error(ErrorCode::NegativeCorner,
                    "corner value " + std::to_string(v) + " is negative");
      }
    }
  }

  double ac() const noexcept { return v_[0]; }
  double ad() const noexcept { return v_[1]; }
  double bc() const noexcept { return v_[2]; }
  double bd() const noexcept { return v_[3]; }

  double sum() const noexcept { return (v_[0] + v_[1]) + (v_[2] + v_[3]); }
  double mean() const noexcept { return 0.25 * sum(); }
  double max() const noexcept {
    double m = v_[0];
    for (double v : v_) m = v > m ? v : m;
    return m;
  }

  const std::array<double, 4>& values() const noexcept { return v_; }

 private:
  std::array<double, 4> v_;
};

}  // namespace hhcub
