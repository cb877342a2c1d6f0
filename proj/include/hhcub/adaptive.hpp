#pragma once

/*
 * Certified adaptive integration.
 *
 * The rectangle is refined by 4-way splits at the midlines. On every panel
 * the rule estimate Q is taken and the T5 bound serves as the panel's error
 * certificate. The panel with the largest raw certificate (bound times
 * area) is split next; ties go to the panel with the lowest (a, c) corner.
 * Refinement stops when the summed raw certificate is <= tol.
 *
 * Co-ordinated convexity of |fxy| is checked once on the root rectangle;
 * restrictions to sub-rectangles inherit it. When the check fails the
 * certificate is still computed but is only advisory.
 */

#include <algorithm>
#include <cstddef>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hhcub/bounds.hpp"
#include "hhcub/core.hpp"
#include "hhcub/cubature.hpp"
#include "hhcub/expr.hpp"
#include "hhcub/quadrature.hpp"
#include "hhcub/verify.hpp"

namespace hhcub {

struct Panel {
  Rectangle rect;
  double estimate;     // Q on this panel, averaged form
  double certificate;  // T5 bound on this panel, averaged form
  double line_err_est; // line quadrature estimate, averaged form
  int depth;

  double raw_certificate() const noexcept { return certificate * rect.area(); }
};

struct CertifiedResult {
  double integral = 0.0;           // raw, not averaged
  double total_certificate = 0.0;  // sum of certificate * area
  double line_err_est = 0.0;       // sum of line_err_est * area
  std::size_t panels = 0;
  double lambda = 0.0;
  bool hypothesis_checked = false;
  int max_depth_reached = 0;
  std::vector<Panel> panel_list;  // sorted by (a, c)
};

class BudgetExhausted : public Error {
 public:
  explicit BudgetExhausted(CertifiedResult partial)
      : Error(ErrorCode::BudgetExhausted,
              "certificate " + std::to_string(partial.total_certificate) + " after " +
                  std::to_string(partial.panels) + " panels"),
        partial_(std::move(partial)) {}

  const CertifiedResult& partial() const noexcept { return partial_; }

 private:
  CertifiedResult partial_;
};

struct AdaptiveLimits {
  int max_depth = 12;
  std::size_t max_panels = 1u << 14;
};

namespace detail {

inline Panel evaluate_panel(const FunctionModel& f, const Rectangle& r,
                            const RuleParams& params, const QuadConfig& cfg, int depth) {
  const Estimate q = approximate_integral_estimate(f, r, params, cfg);
  const BoundReport cert = bound_t5(corner_data(f.fxy, r), r, params);
  return {r, q.value, cert.value, q.err_est, depth};
}

struct WorstFirst {
  bool operator()(const Panel& l, const Panel& r) const noexcept {
    const double lc = l.raw_certificate();
    const double rc = r.raw_certificate();
    if (lc != rc) return lc < rc;
    return std::pair(l.rect.a(), l.rect.c()) > std::pair(r.rect.a(), r.rect.c());
  }
};

inline CertifiedResult collect(std::vector<Panel> panels, const RuleParams& params,
                               bool hypothesis) {
  std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) {
    return std::pair(l.rect.a(), l.rect.c()) < std::pair(r.rect.a(), r.rect.c());
  });
  CertifiedResult out;
  out.lambda = params.lambda();
  out.hypothesis_checked = hypothesis;
  out.panels = panels.size();
  for (const Panel& p : panels) {
    const double area = p.rect.area();
    out.integral += area * p.estimate;
    out.total_certificate += area * p.certificate;
    out.line_err_est += area * p.line_err_est;
    out.max_depth_reached = std::max(out.max_depth_reached, p.depth);
  }
  out.panel_list = std::move(panels);
  return out;
}

}  // namespace detail

inline CertifiedResult integrate_certified(const FunctionModel& f, const Rectangle& r,
                                           const RuleParams& params, double tol,
                                           const AdaptiveLimits& limits,
                                           const QuadConfig& cfg = {}) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be >= 0");
  if (limits.max_depth < 0) throw Error(ErrorCode::InvalidConfig, "max_depth must be >= 0");
  cfg.validate();

  const bool hypothesis = is_abs_mixed_power_convex(f.fxy, r, 1.0).passed;

  std::priority_queue<Panel, std::vector<Panel>, detail::WorstFirst> open;
  std::vector<Panel> frozen;
  double total_raw = 0.0;

  const Panel root = detail::evaluate_panel(f, r, params, cfg, 0);
  total_raw += root.raw_certificate();
  open.push(root);

  auto drain = [&] {
    std::vector<Panel> all = frozen;
    while (!open.empty()) {
      all.push_back(open.top());
      open.pop();
    }
    return all;
  };

  for (;;) {
    if (total_raw <= tol) {
      // Confirm with the deterministic sorted summation before stopping.
      CertifiedResult out = detail::collect(drain(), params, hypothesis);
      if (out.total_certificate <= tol) return out;
      total_raw = out.total_certificate;
      frozen.clear();
      for (const Panel& p : out.panel_list) open.push(p);
    }
    if (open.empty() || frozen.size() + open.size() + 3 > limits.max_panels) {
      throw BudgetExhausted(detail::collect(drain(), params, hypothesis));
    }
    const Panel worst = open.top();
    open.pop();
    if (worst.depth >= limits.max_depth) {
      frozen.push_back(worst);
      continue;
    }
    total_raw -= worst.raw_certificate();
    for (const Rectangle& q : worst.rect.quadrants()) {
      const Panel child = detail::evaluate_panel(f, q, params, cfg, worst.depth + 1);
      total_raw += child.raw_certificate();
      open.push(child);
    }
  }
}

inline CertifiedResult integrate_certified(const FunctionModel& f, const Rectangle& r,
                                           const RuleParams& params, double tol,
                                           int max_depth = AdaptiveLimits{}.max_depth,
                                           const QuadConfig& cfg = {}) {
  AdaptiveLimits limits;
  limits.max_depth = max_depth;
  return integrate_certified(f, r, params, tol, limits, cfg);
}

}  // namespace hhcub
