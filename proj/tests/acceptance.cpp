// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hhcub/hhcub.hpp"
#include "test_support.hpp"

namespace {

using namespace hhcub;
using Clock = std::chrono::steady_clock;

const double kLambdas[] = {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0};

std::vector<Rectangle> acceptance_rects() {
  return {unit_square(), validate_rectangle(0, 1, 0, 2), validate_rectangle(-1, 1, -1, 1),
          validate_rectangle(0.5, 2, -0.25, 0.75), validate_rectangle(-2, -1.5, 1, 3)};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Verdict {
  bool pass;
  std::string detail;
};

// 1. Identity residual over corpus x rectangles x lambdas.
Verdict identity() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string where;
  int n = 0;
  for (const std::string& text : testing::smooth_corpus()) {
    const FunctionModel f = FunctionModel::from_text(text);
    for (const Rectangle& r : acceptance_rects()) {
      for (double lambda : kLambdas) {
        const double res = std::abs(identity_residual(f, r, RuleParams(lambda)));
        ++n;
        if (res > worst) {
          worst = res;
          where = text;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu functions, %d cases, max |residual| %.3g (%s), %.2f s",
                testing::smooth_corpus().size(), n, worst, where.c_str(), secs);
  return {testing::smooth_corpus().size() >= 20 && worst <= 1e-8 && secs <= 60.0, buf};
}

// 2. Special-case constants.
Verdict constants() {
  const CornerData ones(1, 1, 1, 1);
  const CornerData mixed(0.5, 2.0, 3.25, 7.0);
  const Rectangle u = unit_square();
  const RuleParams simpson = RuleParams::simpson();
  std::vector<std::pair<std::string, double>> errs = {
      {"lambda=1 T5 on corner mean", rel_err(bound_t5(ones, u, RuleParams(1.0)).value, 1.0 / 16)},
      {"lambda=0 T5 on corner sum",
       rel_err(bound_t5(mixed, u, RuleParams(0.0)).value / mixed.sum(), 1.0 / 64)},
      {"lambda=1/3 T5 on corner sum",
       rel_err(bound_t5(mixed, u, simpson).value / mixed.sum(), 25.0 / 5184)},
      {"lambda=1/3 factor", rel_err(lambda_factor(simpson), 25.0 / 81)},
      {"lambda=1/3 T6 relaxed", rel_err(bound_t6_relaxed(ones, u, simpson, 2).value, 25.0 / 324)},
      {"lambda=1/3 T7", rel_err(bound_t7(ones, u, simpson, 3).value, 25.0 / 1296)},
      {"lambda=1/3 kernel mass", rel_err(kernel_abs_mass(u, simpson), 25.0 / 1296)},
  };
  for (double p : {1.25, 1.5, 2.0, 3.0, 7.5, 50.0}) {
    const HolderExponents he(p, p / (p - 1));
    errs.push_back({"lambda=1/3 T6 p=" + std::to_string(p),
                    rel_err(bound_t6(ones, u, simpson, he).value,
                            25.0 / (324.0 * std::pow(p + 1.0, 2.0 / p)))});
  }
  double worst = 0.0;
  std::string which;
  for (const auto& [name, e] : errs) {
    if (e > worst) {
      worst = e;
      which = name;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu constants, max rel err %.3g%s%s", errs.size(), worst,
                which.empty() ? "" : " at ", which.c_str());
  return {worst <= 1e-14, buf};
}

struct SoundnessCase {
  std::string text;
  Rectangle rect;
  double lambda;
  double q;
  double error;
  double slack;
  CornerData corners;
};

std::vector<std::string> soundness_corpus() {
  std::vector<std::string> c = testing::smooth_corpus();
  c.insert(c.end(), {"x^4*y^4", "exp(2*x)*exp(3*y)", "x^3*y^3 + x*y", "exp(x*y)*x"});
  return c;
}

// 3. Bound soundness wherever the convexity hypothesis passes.
Verdict soundness(std::vector<SoundnessCase>& cases) {
  int checked = 0;
  int violations = 0;
  double worst_ratio = 0.0;
  const double qs[] = {1.0, 1.5, 2.0, 3.0};
  for (const std::string& text : soundness_corpus()) {
    const FunctionModel f = FunctionModel::from_text(text);
    for (const Rectangle& r : acceptance_rects()) {
      const Estimate total = integrate_2d(f, r);
      const double avg = total.value / r.area();
      for (double q : qs) {
        if (!is_abs_mixed_power_convex(f.fxy, r, q).passed) continue;
        const CornerData cq = corner_data(f.fxy, r, q);
        for (double lambda : kLambdas) {
          const RuleParams p(lambda);
          const Estimate qe = approximate_integral_estimate(f, r, p);
          const double err = std::abs(avg - qe.value);
          const double slack = 10.0 * (qe.err_est + total.err_est / r.area());
          std::vector<BoundReport> bs;
          if (q == 1.0) bs.push_back(bound_t5(cq, r, p));
          if (q > 1.0) bs.push_back(bound_t6(cq, r, p, HolderExponents::from_q(q)));
          if (q != 1.5) bs.push_back(bound_t7(cq, r, p, q));
          for (const BoundReport& b : bs) {
            ++checked;
            if (err > b.value + slack) {
              ++violations;
              std::printf("  violation: %s lambda=%g q=%g %s error %.6g bound %.6g\n",
                          text.c_str(), lambda, q, to_string(b.theorem), err, b.value);
            }
            if (b.value > 0) worst_ratio = std::max(worst_ratio, err / b.value);
          }
          cases.push_back({text, r, lambda, q, err, slack, cq});
        }
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d bound checks, %d violations, max actual/bound %.3f", checked,
                violations, worst_ratio);
  return {checked > 0 && violations == 0, buf};
}

// 4. T7 <= T6 on every tested input, and the coefficient sandwich.
Verdict ordering(const std::vector<SoundnessCase>& cases) {
  int checked = 0;
  int bad = 0;
  auto check = [&](const CornerData& c, const Rectangle& r, const RuleParams& p, double q) {
    ++checked;
    const double t6 = bound_t6(c, r, p, HolderExponents::from_q(q)).value;
    if (!(bound_t7(c, r, p, q).value <= t6)) ++bad;
  };
  for (const SoundnessCase& sc : cases) {
    if (sc.q > 1.0) check(sc.corners, sc.rect, RuleParams(sc.lambda), sc.q);
  }
  testing::Rng rng(404);
  for (int i = 0; i < 20000; ++i) {
    const CornerData c(testing::uniform(rng, 0, 5), testing::uniform(rng, 0, 5),
                       testing::uniform(rng, 0, 5), testing::uniform(rng, 0, 5));
    const Rectangle r = validate_rectangle(0, testing::uniform(rng, 0.01, 4), 0,
                                           testing::uniform(rng, 0.01, 4));
    check(c, r, RuleParams(testing::uniform(rng, 0, 1)), 1.0 + std::exp(testing::uniform(rng, -6, 5)));
  }
  int sandwich_bad = 0;
  const int n_p = 100000;
  for (int i = 0; i < n_p; ++i) {
    // log-uniform on (1, 50]
    double p = std::exp(testing::uniform(rng, 0.0, std::log(50.0)));
    if (p <= 1.0) p = std::nextafter(1.0, 2.0);
    const double coeff = 1.0 / (4.0 * std::pow(p + 1.0, 2.0 / p));
    if (!(1.0 / 16.0 < coeff && coeff < 0.25)) ++sandwich_bad;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d T7<=T6 checks (%d bad), %d sandwich samples (%d bad)",
                checked, bad, n_p, sandwich_bad);
  return {bad == 0 && sandwich_bad == 0, buf};
}

// 5. Exactness for g(x) + h(y) + c x y.
Verdict exactness() {
  testing::Rng rng(55);
  double worst_rule = 0.0;
  double worst_identity = 0.0;
  int made = 0;
  while (made < 10) {
    const Expr g = testing::random_univariate(rng, Var::X, 3);
    const Expr h = testing::random_univariate(rng, Var::Y, 3);
    const double c = std::round(testing::uniform(rng, -5, 5) * 100) / 100;
    const Expr f = simplify::add(
        simplify::add(g, h),
        simplify::mul(Expr::number(c), simplify::mul(Expr::x(), Expr::y())));
    const FunctionModel m = FunctionModel::from_expr(f);
    ++made;
    for (const Rectangle& r : acceptance_rects()) {
      for (double lambda : kLambdas) {
        const RuleParams p(lambda);
        worst_identity = std::max(worst_identity, std::abs(identity_residual(m, r, p)));
        const double avg = integrate_2d(m, r).value / r.area();
        worst_rule = std::max(worst_rule, std::abs(approximate_integral(m, r, p) - avg));
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d functions, max |Q - avg| %.3g, max |identity residual| %.3g",
                made, worst_rule, worst_identity);
  return {worst_rule <= 1e-12 && worst_identity <= 1e-12, buf};
}

// 6. Hadamard chain.
Verdict chain() {
  std::vector<std::string> corpus = testing::smooth_corpus();
  corpus.insert(corpus.end(), {"abs(x) + abs(y)", "exp(x) + exp(y)", "(x - y)^2", "x^4*y^2",
                               "exp(x + y)"});
  int convex = 0;
  int broken = 0;
  for (const std::string& text : corpus) {
    const FunctionModel f = FunctionModel::from_text(text);
    for (const Rectangle& r : acceptance_rects()) {
      if (!is_coordinate_convex(f.f, r).passed) continue;
      ++convex;
      const HadamardChain c = hadamard_chain(f, r);
      if (!c.is_monotone(10.0 * c.err_est)) {
        ++broken;
        std::printf("  chain broken: %s %.17g %.17g %.17g %.17g %.17g\n", text.c_str(), c.v1,
                    c.v2, c.v3, c.v4, c.v5);
      }
    }
  }
  double worst_eq = 0.0;
  for (const char* text : {"7", "-2.5", "x*y"}) {
    const FunctionModel f = FunctionModel::from_text(text);
    for (const Rectangle& r : acceptance_rects()) {
      const HadamardChain c = hadamard_chain(f, r);
      for (double v : {c.v2, c.v3, c.v4, c.v5}) worst_eq = std::max(worst_eq, std::abs(v - c.v1));
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d convex cases, %d non-monotone, equality spread %.3g", convex,
                broken, worst_eq);
  return {convex > 0 && broken == 0 && worst_eq <= 1e-12, buf};
}

// 7. Certified adaptive integration.
Verdict adaptive() {
  const FunctionModel f = FunctionModel::from_text("x^2*y^2");
  const auto t0 = Clock::now();
  const CertifiedResult a = integrate_certified(f, unit_square(), RuleParams(1.0), 1e-4);
  const double secs = seconds_since(t0);
  const CertifiedResult b = integrate_certified(f, unit_square(), RuleParams(1.0), 1e-4);
  const double err = std::abs(a.integral - 1.0 / 9.0);
  const bool same = a.panels == b.panels && a.integral == b.integral &&
                    a.total_certificate == b.total_certificate;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu panels, |I - 1/9| %.3g <= certificate %.3g, %.3f s, deterministic %s",
                a.panels, err, a.total_certificate, secs, same ? "yes" : "no");
  return {err <= a.total_certificate && a.total_certificate <= 1e-4 && secs <= 5.0 && same &&
              a.hypothesis_checked,
          buf};
}

// 8. Symbolic mixed partial against the cross-difference stencil.
Verdict derivatives() {
  testing::Rng rng(808);
  int samples = 0;
  int failures = 0;
  double worst = 0.0;
  while (samples < 200) {
    const Expr e = testing::random_smooth(rng, 4);
    const Expr dxy = differentiate_xy(e);
    const double x = testing::uniform(rng, -1, 1);
    const double y = testing::uniform(rng, -1, 1);
    const auto fv = testing::try_eval(e, x, y);
    const auto sym = testing::try_eval(dxy, x, y);
    if (!fv || !sym || std::abs(*fv) > 1e6) continue;
    ++samples;
    const double fd = static_cast<double>(testing::fd_mixed(e, x, y, 1e-4));
    const double rel = std::abs(*sym - fd) / std::max(std::abs(*sym), 1.0);
    worst = std::max(worst, rel);
    if (rel > 1e-5) ++failures;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d samples, %d outside 1e-5, max rel err %.3g", samples,
                failures, worst);
  return {failures == 0, buf};
}

}  // namespace

int main() {
  std::vector<SoundnessCase> cases;
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"identity residual", identity},
      {"special-case constants", constants},
      {"bound soundness", [&] { return soundness(cases); }},
      {"bound ordering", [&] { return ordering(cases); }},
      {"exactness class", exactness},
      {"Hadamard chain", chain},
      {"certified adaptive", adaptive},
      {"derivative correctness", derivatives},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, c.name,
                v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
