#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "kolmo/polyfun.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace kolmo;
using testing_support::in_cube;
using testing_support::random_func;

TEST(PolyhedralFunc, RejectsBadInput) {
  EXPECT_THROW(PolyhedralFunc(2, {}, {}), PreconditionError);
  EXPECT_THROW(PolyhedralFunc(2, {1.0, 0.0, 1.0}, {0.0, 0.0}), PreconditionError);
  EXPECT_THROW(PolyhedralFunc(1, {std::nan("")}, {0.0}), PreconditionError);
  EXPECT_THROW(PolyhedralFunc(0, {}, {0.0}), PreconditionError);
}

TEST(PolyhedralFunc, EvalAndLip) {
  const PolyhedralFunc f(2, {3.0, 4.0, 0.0, 1.0, 3.0, 4.0}, {0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(f.lip(), 5.0);
  const EvalResult r = eval(f, Point{0.0, 0.0});
  EXPECT_EQ(r.argmax, 0u);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  EXPECT_DOUBLE_EQ(eval(f, Point{-1.0, 0.0}).value, 0.0);
  EXPECT_EQ(eval(f, Point{-1.0, 0.0}).argmax, 1u);
  EXPECT_THROW(eval(f, Point{1.0}), DimensionError);
}

TEST(PolyhedralFunc, EvalMatchesBruteForce) {
  SampleStream s(11);
  for (int t = 0; t < 50; ++t) {
    const PolyhedralFunc f = random_func(1 + t % 4, 1 + s.index(12), 1.0, s);
    EXPECT_DOUBLE_EQ(f.lip(), oracle::lip(f));
    for (int i = 0; i < 50; ++i) {
      const Point x = in_cube(f.dim(), 3.0, s);
      const double v = oracle::value(f, x);
      EXPECT_NEAR(eval(f, x).value, v, 1e-14 * (1.0 + std::abs(v)));
    }
  }
}

TEST(Prox, SoftThresholdInOneDimension) {
  const double a = 0.3;
  const PolyhedralFunc f(1, {a, -a}, {0.0, 0.0});
  for (double x : {-2.0, -0.31, -0.3, -0.1, 0.0, 0.2, 0.3, 1.5}) {
    const double expect = x > a ? x - a : x < -a ? x + a : 0.0;
    const ProxResult r = prox(f, Point{x});
    EXPECT_NEAR(r.y[0], expect, 1e-14) << x;
    EXPECT_EQ(r.differentiable, std::abs(x) > a + 1e-12) << x;
  }
}

TEST(Prox, MatchesActiveSetEnumeration) {
  SampleStream s(12);
  for (int t = 0; t < 200; ++t) {
    const PolyhedralFunc f = random_func(1 + t % 4, 1 + s.index(8), 1.0, s);
    const Point x = in_cube(f.dim(), 2.0, s);
    const ProxResult r = prox(f, x);
    const auto expect = oracle::prox_enumerate(f, x);
    ASSERT_TRUE(expect.has_value());
    EXPECT_LE(oracle::gap(r.y, *expect), 1e-10);
    EXPECT_LE(r.certificate_residual, 1e-7);
    const double wsum = [&] {
      double w = 0.0;
      for (double v : r.dual_weights) w += v;
      return w;
    }();
    EXPECT_NEAR(wsum, 1.0, 1e-12);
  }
}

TEST(Prox, WarmStartGivesSameAnswer) {
  SampleStream s(13);
  const PolyhedralFunc f = random_func(3, 10, 1.0, s);
  std::vector<std::size_t> warm;
  for (int i = 0; i < 500; ++i) {
    const Point x = in_cube(3, 2.0, s);
    const ProxResult cold = prox(f, x);
    const ProxResult hot = prox(f, x, {}, warm);
    warm = hot.active;
    EXPECT_LE(distance(cold.y, hot.y), 1e-12);
  }
}

TEST(Prox, OptimalityAgainstPerturbations) {
  SampleStream s(14);
  const PolyhedralFunc f = random_func(2, 6, 1.0, s);
  for (int i = 0; i < 100; ++i) {
    const Point x = in_cube(2, 2.0, s);
    const Point y = prox(f, x).y;
    const double best = oracle::prox_objective(f, x, y);
    for (int k = 0; k < 20; ++k) {
      const Point z = y + testing_support::in_ball(2, 1e-3, s);
      EXPECT_GE(oracle::prox_objective(f, x, z), best - 1e-15);
    }
  }
}

TEST(Prox, GridOracleAgrees) {
  SampleStream s(15);
  for (int t = 0; t < 20; ++t) {
    const PolyhedralFunc f = random_func(2, 1 + s.index(5), 1.0, s);
    const Point x = in_cube(2, 2.0, s);
    EXPECT_LE(distance(prox(f, x).y, prox_oracle(f, x, f.lip() + 0.05)), 1e-4);
  }
  const PolyhedralFunc g(1, {0.5, -0.5}, {0.0, 0.0});
  EXPECT_NEAR(prox_oracle(g, Point{2.0}, 1.0)[0], 1.5, 1e-6);
}

TEST(Prox, DimensionMismatch) {
  const PolyhedralFunc f(2, {1.0, 0.0}, {0.0});
  EXPECT_THROW(prox(f, Point{1.0, 2.0, 3.0}), DimensionError);
}

TEST(Certificate, AcceptsProxRejectsOther) {
  const PolyhedralFunc f(2, {0.0, 1.0, 0.0, -2.0}, {0.0, 0.0});
  const Point x{1.0, 0.5};
  const ProxResult r = prox(f, x);
  EXPECT_TRUE(subgradient_certificate(f, x, r.y).ok);
  EXPECT_FALSE(subgradient_certificate(f, x, Point{1.0, 0.3}).ok);
}

TEST(ActivePieces, KinksAndDiameter) {
  const PolyhedralFunc f(2, {0.0, 1.0, 0.0, -2.0, 1.0, -1.0}, {0.0, 0.0, -4.0});
  const auto act = active_pieces(f, Point{0.0, 0.0});
  ASSERT_EQ(act.size(), 2u);
  EXPECT_DOUBLE_EQ(gradient_diameter(f, act), 3.0);
  EXPECT_FALSE(differentiable_at(f, Point{0.0, 0.0}));
  EXPECT_TRUE(differentiable_at(f, Point{0.0, 1.0}));
}

TEST(Tolerances, Validate) {
  Tolerances t;
  EXPECT_NO_THROW(t.validate());
  t.act_tol = -1.0;
  EXPECT_THROW(t.validate(), PreconditionError);
}
