#include <gtest/gtest.h>

#include <cmath>

#include "hhcub/bounds.hpp"
#include "hhcub/cubature.hpp"
#include "hhcub/verify.hpp"
#include "test_support.hpp"

namespace hhcub {
namespace {

const double kLambdas[] = {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0};

TEST(LambdaFactor, Examples) {
  EXPECT_EQ(lambda_factor(RuleParams(0.0)), 1.0);
  EXPECT_EQ(lambda_factor(RuleParams(1.0)), 1.0);
  EXPECT_NEAR(lambda_factor(RuleParams::simpson()), 25.0 / 81.0, 1e-16);
  EXPECT_EQ(lambda_factor(RuleParams(0.5)), 0.25);
}

TEST(LambdaFactor, SymmetricUnderReflection) {
  testing::Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const double l = testing::uniform(rng, 0.5, 1.0);
    EXPECT_EQ(lambda_factor(RuleParams(l)), lambda_factor(RuleParams(1.0 - l))) << l;
  }
}

TEST(LambdaFactor, RangeIsQuarterToOne) {
  for (int i = 0; i <= 1000; ++i) {
    const double f = lambda_factor(RuleParams(i / 1000.0));
    EXPECT_GE(f, 0.25);
    EXPECT_LE(f, 1.0);
  }
}

const FunctionModel& sq() {
  static const FunctionModel f = FunctionModel::from_text("x^2*y^2");
  return f;
}

TEST(BoundT5, Examples) {
  const BoundReport b = bound_t5(corner_data(sq().fxy, unit_square()), unit_square(),
                                 RuleParams(1.0));
  EXPECT_EQ(b.theorem, Theorem::T5);
  EXPECT_DOUBLE_EQ(b.value, 0.0625);
  EXPECT_FALSE(b.p);
  EXPECT_FALSE(b.q);
  EXPECT_LE(1.0 / 36.0, b.value);

  EXPECT_EQ(bound_t5(CornerData(0, 0, 0, 0), unit_square(), RuleParams(0.3)).value, 0.0);

  const CornerData c(1.5, 2.0, 0.25, 7.0);
  EXPECT_NEAR(bound_t5(c, unit_square(), RuleParams::simpson()).value, 25.0 * c.sum() / 5184.0,
              1e-15);
}

TEST(BoundT5, NegativeCornerRejected) {
  try {
    bound_t5(CornerData(0, -1, 0, 0), unit_square(), RuleParams(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeCorner);
  }
}

TEST(BoundT6, Examples) {
  const HolderExponents two(2, 2);
  EXPECT_NEAR(bound_t6(CornerData(1, 1, 1, 1), unit_square(), RuleParams::simpson(), two).value,
              25.0 / 972.0, 1e-16);
  const double k = 3.7;
  const double coeff =
      bound_t6(CornerData(1, 1, 1, 1), unit_square(), RuleParams(0.8), HolderExponents::from_q(3))
          .value;
  EXPECT_NEAR(bound_t6(CornerData(k, k, k, k), unit_square(), RuleParams(0.8),
                       HolderExponents::from_q(3)).value,
              coeff * std::cbrt(k), 1e-15);
  const BoundReport b = bound_t6(corner_data(sq().fxy, unit_square(), 2), unit_square(),
                                 RuleParams(1.0), two);
  EXPECT_NEAR(b.value, 1.0 / 6.0, 1e-15);
  EXPECT_EQ(b.p, 2.0);
  EXPECT_EQ(b.q, 2.0);
  EXPECT_THROW(HolderExponents(2, 3), Error);
}

TEST(BoundT6Relaxed, Examples) {
  EXPECT_NEAR(bound_t6_relaxed(CornerData(1, 1, 1, 1), unit_square(), RuleParams::simpson(), 2)
                  .value,
              25.0 / 324.0, 1e-16);
  EXPECT_EQ(bound_t6_relaxed(CornerData(0, 0, 0, 0), unit_square(), RuleParams(0.1), 4).value,
            0.0);
  const BoundReport b =
      bound_t6_relaxed(CornerData(1, 2, 3, 4), unit_square(), RuleParams(0.1), 4);
  EXPECT_EQ(b.theorem, Theorem::T6Relaxed);
  EXPECT_TRUE(b.p);
  EXPECT_EQ(b.q, 4.0);
}

TEST(BoundT7, Examples) {
  const CornerData c(0.5, 1.5, 2.0, 4.0);
  for (double lambda : kLambdas) {
    const RuleParams p(lambda);
    EXPECT_EQ(bound_t7(c, unit_square(), p, 1.0).value, bound_t5(c, unit_square(), p).value);
  }
  EXPECT_NEAR(bound_t7(CornerData(1, 1, 1, 1), unit_square(), RuleParams::simpson(), 2).value,
              25.0 / 1296.0, 1e-16);
  const double t7 =
      bound_t7(corner_data(sq().fxy, unit_square(), 2), unit_square(), RuleParams(1.0), 2).value;
  EXPECT_NEAR(t7, 0.125, 1e-15);
  EXPECT_LE(1.0 / 36.0, t7);
  try {
    bound_t7(c, unit_square(), RuleParams(0.5), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidExponents);
  }
}

TEST(BestBound, Examples) {
  const double grid2[] = {2.0};
  const BoundReport b = best_bound(sq(), unit_square(), RuleParams(1.0), grid2);
  EXPECT_EQ(b.theorem, Theorem::T5);
  EXPECT_DOUBLE_EQ(b.value, 0.0625);

  const FunctionModel bilinear = FunctionModel::from_text("3*x*y + x^2");
  const Rectangle r = validate_rectangle(0, 2, -1, 3);
  const BoundReport c = best_bound(bilinear, r, RuleParams(0.25));
  EXPECT_EQ(c.theorem, Theorem::T5);
  EXPECT_NEAR(c.value, r.area() / 16 * lambda_factor(RuleParams(0.25)) * 3, 1e-14);

  const BoundReport e = best_bound(sq(), unit_square(), RuleParams(0.5), {});
  EXPECT_EQ(e.theorem, Theorem::T5);
}

TEST(BestBound, IsMinimumOverCandidates) {
  testing::Rng rng(31);
  const double grid[] = {1.0, 1.5, 2.0, 3.0, 5.0};
  for (const std::string& text : testing::smooth_corpus()) {
    const FunctionModel f = FunctionModel::from_text(text);
    const Rectangle r = validate_rectangle(0.1, 1.3, -0.5, 0.9);
    const RuleParams p(testing::uniform(rng, 0, 1));
    const BoundReport best = best_bound(f, r, p, grid);
    EXPECT_LE(best.value, bound_t5(corner_data(f.fxy, r), r, p).value);
    for (double q : grid) {
      EXPECT_LE(best.value, bound_t7(corner_data(f.fxy, r, q), r, p, q).value);
      if (q > 1) {
        EXPECT_LE(best.value,
                  bound_t6(corner_data(f.fxy, r, q), r, p, HolderExponents::from_q(q)).value);
      }
    }
  }
}

CornerData random_corners(testing::Rng& rng) {
  auto v = [&] { return testing::pick(rng, 10) == 0 ? 0.0 : testing::uniform(rng, 0, 10); };
  return CornerData(v(), v(), v(), v());
}

TEST(Bounds, T7DominatedByT6) {
  testing::Rng rng(9);
  for (int i = 0; i < 5000; ++i) {
    const CornerData c = random_corners(rng);
    const double q = 1.0 + std::exp(testing::uniform(rng, -5, 4));
    const RuleParams p(testing::uniform(rng, 0, 1));
    const Rectangle r = validate_rectangle(0, testing::uniform(rng, 0.1, 5), 0,
                                           testing::uniform(rng, 0.1, 5));
    const HolderExponents he = HolderExponents::from_q(q);
    const double t6 = bound_t6(c, r, p, he).value;
    EXPECT_LE(bound_t7(c, r, p, q).value, t6);
    EXPECT_LE(t6, bound_t6_relaxed(c, r, p, q).value);
  }
}

TEST(Bounds, CoefficientSandwich) {
  testing::Rng rng(10);
  for (int i = 0; i < 5000; ++i) {
    const double p = std::exp(testing::uniform(rng, 1e-9, std::log(50.0)));
    const double coeff = 1.0 / (4.0 * std::pow(p + 1.0, 2.0 / p));
    EXPECT_LT(1.0 / 16.0, coeff) << p;
    EXPECT_LT(coeff, 0.25) << p;
  }
}

TEST(Bounds, ScalingCovariance) {
  testing::Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const CornerData c = random_corners(rng);
    const double a = testing::uniform(rng, -5, 5);
    const double cc = testing::uniform(rng, -5, 5);
    const Rectangle r = validate_rectangle(a, a + testing::uniform(rng, 0.01, 9), cc,
                                           cc + testing::uniform(rng, 0.01, 9));
    const RuleParams p(testing::uniform(rng, 0, 1));
    const double q = testing::uniform(rng, 1.01, 6);
    const Rectangle u = unit_square();
    EXPECT_EQ(bound_t5(c, r, p).value, r.area() * bound_t5(c, u, p).value);
    EXPECT_EQ(bound_t7(c, r, p, q).value, r.area() * bound_t7(c, u, p, q).value);
    const HolderExponents he = HolderExponents::from_q(q);
    EXPECT_EQ(bound_t6(c, r, p, he).value, r.area() * bound_t6(c, u, p, he).value);
    EXPECT_EQ(bound_t6_relaxed(c, r, p, q).value, r.area() * bound_t6_relaxed(c, u, p, q).value);
  }
}

TEST(Bounds, SoundOnConvexCorpus) {
  const std::vector<Rectangle> rects = {unit_square(), validate_rectangle(0, 1, 0, 2),
                                        validate_rectangle(0.5, 2, 0.25, 0.75),
                                        validate_rectangle(-1, 1, -1, 1)};
  const double qs[] = {1.0, 1.5, 2.0, 3.0};
  int checked = 0;
  for (const std::string& text : testing::smooth_corpus()) {
    const FunctionModel f = FunctionModel::from_text(text);
    for (const Rectangle& r : rects) {
      const double avg_est = integrate_2d(f, r).value / r.area();
      const double avg_err = integrate_2d(f, r).err_est / r.area();
      for (double q : qs) {
        if (!is_abs_mixed_power_convex(f.fxy, r, q).passed) continue;
        const CornerData cq = corner_data(f.fxy, r, q);
        for (double lambda : kLambdas) {
          const RuleParams p(lambda);
          const Estimate qe = approximate_integral_estimate(f, r, p);
          const double err = std::abs(avg_est - qe.value);
          const double slack = 10 * (qe.err_est + avg_err) + 1e-14 * std::abs(avg_est);
          if (q == 1.0) {
            EXPECT_LE(err, bound_t5(cq, r, p).value + slack) << text;
          } else {
            EXPECT_LE(err, bound_t6(cq, r, p, HolderExponents::from_q(q)).value + slack) << text;
          }
          EXPECT_LE(err, bound_t7(cq, r, p, q).value + slack) << text;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 200);
}

}  // namespace
}  // namespace hhcub
