#include <gtest/gtest.h>

#include <cmath>

#include "meanbound/comparison.hpp"
#include "meanbound/rng.hpp"
#include "oracle.hpp"

using namespace meanbound;

TEST(ComparisonPolys, FExamples) {
  for (double v : {0.0, 0.3, 0.75, 1.0, 2.5}) EXPECT_EQ(comparison_poly_f(1.0, Weight(v)), 0.0);
  EXPECT_DOUBLE_EQ(comparison_poly_f(2.0, Weight(0.75)), 20.0);
  EXPECT_DOUBLE_EQ(comparison_poly_f(0.5, Weight(1.0)), 0.8125);
  EXPECT_THROW(comparison_poly_f(0.0, Weight(1.0)), std::domain_error);
}

TEST(ComparisonPolys, GExamples) {
  for (double v : {0.0, 0.3, 0.75, 1.0}) EXPECT_EQ(comparison_poly_g(1.0, Weight(v)), 0.0);
  EXPECT_DOUBLE_EQ(comparison_poly_g(2.0, Weight(0.75)), 32.5);
  EXPECT_DOUBLE_EQ(comparison_poly_g(3.0, Weight(1.0)), 1000.0);
  EXPECT_THROW(comparison_poly_g(-1.0, Weight(1.0)), std::domain_error);
}

TEST(ComparisonPolys, FactorizationsAndFloors) {
  auto rng = Xoshiro256ss::stream(71, {1});
  for (int t = 0; t < 2000; ++t) {
    const double x = rng.log_uniform(0.05, 20.0);
    const double scale = 10.0 * (1.0 + std::pow(x, 6.0));
    EXPECT_NEAR(comparison_poly_f(x, Weight(0.75)), comparison_poly_f_floor(x), 1e-14 * scale);
    EXPECT_NEAR(comparison_poly_g(x, Weight(0.75)), comparison_poly_g_floor(x), 1e-14 * scale);
    const Weight w(rng.uniform(0.75, 1.0));
    EXPECT_GE(comparison_poly_f(x, w), comparison_poly_f_floor(x) - 1e-13 * scale);
    EXPECT_GE(comparison_poly_g(x, w), comparison_poly_g_floor(x) - 1e-13 * scale);
    EXPECT_GE(comparison_poly_f_floor(x), 0.0);
    EXPECT_GE(comparison_poly_g_floor(x), 0.0);
  }
}

TEST(ComparisonPolys, QuarticFormOnItsRegion) {
  auto rng = Xoshiro256ss::stream(72, {1});
  for (int t = 0; t < 5000; ++t) {
    const double tt = rng.log_uniform(1e-3, 1e3);
    const Weight w(rng.uniform(0.75, 1.0));
    const double scale = 3.0 + 5.0 * std::sqrt(tt) + 4.0 * std::pow(tt, 0.625);
    EXPECT_GE(quartic_form(tt, w), -1e-13 * scale) << tt << " " << w.value();
  }
  EXPECT_EQ(quartic_form(1.0, Weight(0.8)), 0.0);
}

TEST(CompareGapBounds, ReferencePoint) {
  const ComparisonReport c = compare_gap_bounds(ScalarPair(1, 16), Weight(0.125), Depth(2));
  const GapBoundEntry* e19 = nullptr;
  const GapBoundEntry* e15 = nullptr;
  for (const auto& e : c.entries) {
    if (e.name.rfind("(19)", 0) == 0) e19 = &e;
    if (e.name.rfind("(15)", 0) == 0) e15 = &e;
  }
  ASSERT_NE(e19, nullptr);
  ASSERT_NE(e15, nullptr);
  EXPECT_NEAR(e19->value, 4.875, 1e-12);
  EXPECT_NEAR(e15->value, 6.1887085, 1e-7);
  EXPECT_TRUE(e19->hypothesis_ok);
  EXPECT_TRUE(e15->hypothesis_ok);
  bool found = false;
  for (const auto& d : c.dominance)
    if (d.tighter == e19->name && d.looser == e15->name) {
      found = true;
      EXPECT_GT(d.margin, 0.0);
    }
  EXPECT_TRUE(found);
  EXPECT_NEAR(c.true_gap, 2.875 - std::sqrt(2.0), 1e-14);
}

TEST(CompareGapBounds, EqualArgumentsAreAllZero) {
  for (double v : {0.1, 0.3, 0.6, 0.9}) {
    const ComparisonReport c = compare_gap_bounds(ScalarPair(7, 7), Weight(v), Depth(4));
    EXPECT_EQ(c.true_gap, 0.0);
    for (const auto& e : c.entries) EXPECT_EQ(e.value, 0.0) << e.name;
  }
}

TEST(CompareGapBounds, ValidBoundsDominateTheTrueGap) {
  auto rng = Xoshiro256ss::stream(73, {1});
  for (int t = 0; t < 3000; ++t) {
    const ScalarPair p(rng.log_uniform(1e-3, 1e3), rng.log_uniform(1e-3, 1e3));
    const Weight w(rng.uniform01());
    const ComparisonReport c = compare_gap_bounds(p, w, Depth(2 + static_cast<int>(rng.below(5))));
    for (const auto& e : c.entries) {
      if (!e.hypothesis_ok) continue;
      EXPECT_GE(e.value, c.true_gap - 1e-9 * (p.a() + p.b())) << e.name;
    }
    for (const auto& d : c.dominance) EXPECT_GE(d.margin, 0.0);
  }
}

TEST(LogLimit, Examples) {
  const double e2 = std::exp(2.0);
  EXPECT_LE(log_limit_gap(ScalarPair(1, e2), Depth(20)), 1e-5);
  for (int n = 1; n <= 30; ++n) EXPECT_EQ(log_limit_gap(ScalarPair(3, 3), Depth(n)), 0.0);
  EXPECT_EQ(limit_inequality_slack(ScalarPair(1, 16), Weight(0.5)), 0.0);
}

TEST(LogLimit, OracleAndRemainderBound) {
  auto rng = Xoshiro256ss::stream(74, {1});
  using oracle::R;
  for (int t = 0; t < 200; ++t) {
    const double a = rng.log_uniform(1e-2, 1e2), b = rng.log_uniform(1e-2, 1e2);
    const double L = std::log(b / a);
    for (int n = 5; n <= 20; ++n) {
      const double got = log_limit_gap(ScalarPair(a, b), Depth(n));
      const R want = abs(oracle::p2(n) * (oracle::rt(R(b) / R(a), n) - 1) - log(R(b) / R(a)));
      EXPECT_NEAR(got, oracle::d(want), 1e-14 * std::max(1.0, std::abs(L)));
      EXPECT_LE(got, L * L * std::ldexp(1.0, 1 - n));
    }
  }
}

TEST(LogLimit, FundamentalInequality) {
  EXPECT_EQ(fundamental_log_slack(1.0), 0.0);
  auto rng = Xoshiro256ss::stream(75, {1});
  for (int t = 0; t < 5000; ++t) {
    const double x = rng.log_uniform(1e-6, 1e6);
    const double s = fundamental_log_slack(x);
    EXPECT_GE(s, 0.0);
    if (std::abs(x - 1.0) >= 1e-6) {
      EXPECT_GE(s, 1e-13);
    }
  }
  EXPECT_THROW(fundamental_log_slack(0.0), std::domain_error);
}

TEST(LogLimit, LimitInequalitiesHoldForAllWeights) {
  auto rng = Xoshiro256ss::stream(76, {1});
  for (int t = 0; t < 5000; ++t) {
    const ScalarPair p(rng.log_uniform(1e-2, 1e2), rng.log_uniform(1e-2, 1e2));
    const Weight w(rng.uniform(-6, 6));
    EXPECT_GE(limit_inequality_slack(p, w), 0.0);
    EXPECT_GE(sc_limit_inequality_slack(p, w, Branch::i), 0.0);
    EXPECT_GE(sc_limit_inequality_slack(p, w, Branch::ii), 0.0);
  }
}
