#include <gtest/gtest.h>

#include <cmath>

#include "meanbound/harness.hpp"
#include "meanbound/operator_bounds.hpp"
#include "oracle.hpp"

using namespace meanbound;

namespace {

SpdMatrix one(double x) { return SpdMatrix(SymMatrix::scalar(x)); }
SpdMatrix diag(std::vector<double> d) { return SpdMatrix(SymMatrix::diagonal(d)); }

constexpr OperatorFamily kAll[] = {OperatorFamily::t6, OperatorFamily::t66, OperatorFamily::c3,
                                   OperatorFamily::c33};

/// The scalar inequality each operator family lifts.
BoundReport scalar_counterpart(OperatorFamily f, const ScalarPair& p, const Weight& w, int n,
                               Branch br) {
  switch (f) {
    case OperatorFamily::t6: return theorem_main_reverse(p, w, Depth(n), br);
    case OperatorFamily::t66: return theorem_extended_sc(p, w, Depth(n), br);
    case OperatorFamily::c3: return heinz_reverse_main(p, w, Depth(n), br);
    case OperatorFamily::c33: return heinz_reverse_sc(p, w, Depth(n), br);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TEST(OperatorBounds, OneByOneExamples) {
  EXPECT_NEAR(theorem_t6(one(1), one(16), Weight(0.125), Depth(2), Branch::i).min_eig_gap,
              3.4142136, 1e-7);
  EXPECT_NEAR(theorem_t66(one(1), one(4), Weight(2), Depth(1), Branch::i).min_eig_gap, 11.0, 1e-12);
  EXPECT_NEAR(theorem_t66(one(1), one(4), Weight(2), Depth(2), Branch::i).min_eig_gap, 11.6862915,
              1e-7);
  EXPECT_NEAR(corollary_c3(one(1), one(16), Weight(0.125), Depth(2), Branch::ii).min_eig_gap,
              0.8639610, 1e-7);
  EXPECT_NEAR(corollary_c33(one(1), one(4), Weight(2), Depth(1), Branch::i).min_eig_gap, 7.625, 1e-12);
  EXPECT_NEAR(corollary_c33(one(1), one(4), Weight(-1), Depth(1), Branch::ii).min_eig_gap, 7.625,
              1e-12);

  const OperatorBoundReport r = theorem_t6(one(1), one(16), Weight(0.125), Depth(2), Branch::i);
  EXPECT_TRUE(r.hypothesis_ok);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.sharp_regime);
  EXPECT_EQ(r.family, "theorem-t6");
  EXPECT_EQ(r.dim, 1u);
  EXPECT_EQ(r.n, 2);
  EXPECT_EQ(r.fingerprint_a, fingerprint(SymMatrix::scalar(1)));
}

TEST(OperatorBounds, EqualArgumentsAreDegenerate) {
  auto rng = Xoshiro256ss::stream(101, {1});
  for (std::size_t dim : {1u, 3u, 6u}) {
    const SpdMatrix a = random_spd(dim, 1e3, rng);
    for (OperatorFamily f : kAll)
      for (Branch br : {Branch::i, Branch::ii}) {
        const OperatorBoundReport r = check_operator(f, a, a, Weight(0.9), Depth(3), br);
        EXPECT_TRUE(r.degenerate);
        EXPECT_EQ(r.min_eig_gap, 0.0);
        EXPECT_TRUE(r.holds);
      }
  }
}

TEST(OperatorBounds, NearEqualWithoutShortCircuitIsTiny) {
  auto rng = Xoshiro256ss::stream(102, {1});
  const SpdMatrix a = random_spd(4, 1e2, rng);
  const OperatorSides s = operator_sides(OperatorFamily::t6, a, a, Weight(0.9), Depth(3), Branch::i);
  EXPECT_LE((s.rhs - s.lhs).frobenius_norm(), 1e-12 * a.matrix().frobenius_norm());
}

TEST(OperatorBounds, DiagonalExamplesMatchEntrywiseOracle) {
  const SpdMatrix a = diag({1, 4}), b = diag({16, 1});
  const double v = 0.125;
  using oracle::R;
  const R w(v);
  const auto t6_gap = [&](double x, double y) {
    return oracle::d(oracle::main_rhs(R(x), R(y), w, 2, 1) - oracle::young(R(x), R(y), w));
  };
  const double want_t6 = std::min(t6_gap(1, 16), t6_gap(4, 1));
  EXPECT_NEAR(theorem_t6(a, b, Weight(v), Depth(2), Branch::i).min_eig_gap, want_t6, 1e-10 * want_t6);

  const auto c3_gap = [&](double x, double y) {
    return oracle::d(oracle::heinz_main_rhs(R(x), R(y), w, 2, 2) - (R(x) + R(y)) / 2);
  };
  const double want_c3 = std::min(c3_gap(1, 16), c3_gap(4, 1));
  EXPECT_NEAR(corollary_c3(a, b, Weight(v), Depth(2), Branch::ii).min_eig_gap, want_c3,
              1e-10 * std::abs(want_c3));
}

TEST(OperatorBounds, ScalarConsistencyOneByOne) {
  auto rng = Xoshiro256ss::stream(103, {1});
  for (int t = 0; t < 2000; ++t) {
    const OperatorFamily f = kAll[rng.below(4)];
    const Branch br = rng.below(2) ? Branch::i : Branch::ii;
    const int n = operator_min_depth(f) + static_cast<int>(rng.below(5));
    const double a = rng.log_uniform(1e-2, 1e2), b = rng.log_uniform(1e-2, 1e2);
    const double v = rng.uniform(-3, 4);
    const OperatorBoundReport op = check_operator(f, one(a), one(b), Weight(v), Depth(n), br);
    const BoundReport sc = scalar_counterpart(f, ScalarPair(a, b), Weight(v), n, br);
    EXPECT_EQ(op.hypothesis_ok, sc.hypothesis_ok);
    if (op.degenerate) continue;
    const double scale = std::abs(sc.lhs) + std::abs(sc.rhs);
    EXPECT_NEAR(op.min_eig_gap, sc.gap, 1e-12 * scale)
        << to_string(f) << "/" << to_string(br) << " a=" << a << " b=" << b << " v=" << v
        << " n=" << n;
  }
}

TEST(OperatorBounds, DiagonalConsistency) {
  auto rng = Xoshiro256ss::stream(104, {1});
  for (int t = 0; t < 500; ++t) {
    const OperatorFamily f = kAll[rng.below(4)];
    const Branch br = rng.below(2) ? Branch::i : Branch::ii;
    const int n = operator_min_depth(f) + static_cast<int>(rng.below(5));
    const std::size_t dim = 2 + rng.below(5);
    std::vector<double> da(dim), db(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      da[i] = rng.log_uniform(1e-2, 1e2);
      db[i] = rng.log_uniform(1e-2, 1e2);
    }
    const double v = rng.uniform(-3, 4);
    double want = INFINITY, scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const BoundReport sc = scalar_counterpart(f, ScalarPair(da[i], db[i]), Weight(v), n, br);
      want = std::min(want, sc.gap);
      scale = std::max(scale, std::abs(sc.lhs) + std::abs(sc.rhs));
    }
    const OperatorBoundReport op = check_operator(f, diag(da), diag(db), Weight(v), Depth(n), br);
    EXPECT_NEAR(op.min_eig_gap, want, 1e-10 * scale) << to_string(f) << "/" << to_string(br);
  }
}

TEST(OperatorBounds, DiagonalCongruenceKeepsVerdict) {
  auto rng = Xoshiro256ss::stream(105, {1});
  for (int t = 0; t < 300; ++t) {
    const std::size_t dim = 2 + rng.below(5);
    std::vector<double> da(dim), db(dim), sa(dim), sb(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      da[i] = rng.log_uniform(1e-2, 1e2);
      db[i] = rng.log_uniform(1e-2, 1e2);
      const double d = rng.log_uniform(0.1, 10) * (rng.below(2) ? 1.0 : -1.0);
      sa[i] = d * da[i] * d;
      sb[i] = d * db[i] * d;
    }
    const Branch br = rng.below(2) ? Branch::i : Branch::ii;
    const int n = 2 + static_cast<int>(rng.below(4));
    const double v = rng.uniform(-3, 4);
    const auto base = theorem_t6(diag(da), diag(db), Weight(v), Depth(n), br);
    const auto moved = theorem_t6(diag(sa), diag(sb), Weight(v), Depth(n), br);
    EXPECT_EQ(base.hypothesis_ok, moved.hypothesis_ok);
    if (base.hypothesis_ok) {
      EXPECT_TRUE(base.holds);
      EXPECT_TRUE(moved.holds);
    }
    EXPECT_EQ(base.min_eig_gap >= 0.0, moved.min_eig_gap >= 0.0);
  }
}

TEST(OperatorBounds, HoldInsideHypothesisOnRandomSpd) {
  auto rng = Xoshiro256ss::stream(106, {1});
  for (int t = 0; t < 400; ++t) {
    const OperatorFamily f = kAll[t % 4];
    const Branch br = (t / 4) % 2 ? Branch::ii : Branch::i;
    const int n = operator_min_depth(f) + static_cast<int>(rng.below(4));
    const std::size_t dim = 2 + rng.below(7);
    const SpdMatrix a = random_spd(dim, 1e4, rng), b = random_spd(dim, 1e4, rng);
    const Weight w = sample_weight(operator_hypothesis(f, n, br), {-6, 6}, 1e-6, rng);
    const OperatorBoundReport r = check_operator(f, a, b, w, Depth(n), br);
    EXPECT_TRUE(r.hypothesis_ok);
    EXPECT_TRUE(r.holds) << to_string(f) << "/" << to_string(br) << " v=" << w.value()
                         << " gap=" << r.min_eig_gap << " tol=" << r.tol;
  }
}

TEST(OperatorBounds, Preconditions) {
  EXPECT_THROW(theorem_t6(one(1), one(2), Weight(0.2), Depth(1), Branch::i), std::domain_error);
  EXPECT_THROW(corollary_c3(one(1), one(2), Weight(0.2), Depth(1), Branch::i), std::domain_error);
  EXPECT_NO_THROW(theorem_t66(one(1), one(2), Weight(0.2), Depth(1), Branch::i));
  EXPECT_THROW(theorem_t66(one(1), diag({1, 2}), Weight(2), Depth(1), Branch::i),
               std::invalid_argument);
  EXPECT_EQ(parse_operator_family("t66"), OperatorFamily::t66);
  EXPECT_EQ(parse_operator_family("corollary-c33"), OperatorFamily::c33);
  EXPECT_FALSE(parse_operator_family("t7"));
  EXPECT_FALSE(operator_hypothesis(OperatorFamily::t66, 3, Branch::i).admits(0.125));
  EXPECT_TRUE(operator_hypothesis(OperatorFamily::t66, 3, Branch::i).admits(0.126));
  EXPECT_FALSE(operator_hypothesis(OperatorFamily::c3, 2, Branch::i).admits(0.75));
}
