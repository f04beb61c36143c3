#include <gtest/gtest.h>

#include <cmath>

#include "faber/seqnorm.hpp"

using namespace faber;

namespace {

BesovParams B(double r, double p, double theta) { return {r, p, theta, BesovParams::Kind::b}; }
BesovParams F(double r, double p, double theta) { return {r, p, theta, BesovParams::Kind::f}; }

}  // namespace

TEST(BNorm, EmptyIsZero) {
  EXPECT_EQ(b_norm(CoefficientTensor(2, 2), B(1, 2, 2)), 0.0);
  EXPECT_EQ(f_norm(CoefficientTensor(2, 2), F(1, 2, 2)), 0.0);
}

TEST(BNorm, SingleEntry) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({3}, {0}), 1.0);
  EXPECT_NEAR(b_norm(t, B(2, 2, 1)), std::exp2(4.5), 1e-12);
}

TEST(BNorm, TwoEntriesSameLevel) {
  CoefficientTensor t(2, 2);
  t.insert(DyadicIndex({1, 2}, {0, 1}), 3.0);
  t.insert(DyadicIndex({1, 2}, {1, 3}), 4.0);
  EXPECT_NEAR(b_norm(t, B(0, 2, 1)), 5.0 * std::exp2(-1.5), 1e-12);
}

TEST(BNorm, LevelMinusOneHasUnitVolume) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({-1}, {4}), -2.5);
  EXPECT_NEAR(b_norm(t, B(3, 1, 1)), 2.5 * std::exp2(-3.0), 1e-15);
  EXPECT_EQ(DyadicBox::volume({-1, 2}), 0.25);
}

TEST(BNorm, ThetaInfinityIsTheLargestLevel) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({0}, {0}), 1.0);
  t.insert(DyadicIndex({2}, {0}), 1.0);
  // weights 1 and 2^{2} * 2^{-1} = 2
  EXPECT_NEAR(b_norm(t, B(1, 2, kInf)), 2.0, 1e-15);
  EXPECT_NEAR(b_norm(t, B(1, 2, 1)), 3.0, 1e-15);
}

TEST(BNorm, PInfinityIsTheLargestEntry) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({1}, {0}), 0.5);
  t.insert(DyadicIndex({1}, {1}), -0.75);
  EXPECT_NEAR(b_norm(t, B(0, kInf, 2)), 0.75, 1e-15);
}

TEST(FNorm, OverlappingTwoLevelCase) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({0}, {0}), 0.75);
  t.insert(DyadicIndex({1}, {0}), -0.5);
  EXPECT_NEAR(f_norm(t, F(0, 1, 1)), 0.75 + 0.25, 1e-12);
  // theta = 2: sqrt(0.75^2 + 0.5^2) on [0,1/2), 0.75 on [1/2,1).
  EXPECT_NEAR(f_norm(t, F(0, 1, 2)), 0.5 * std::sqrt(0.8125) + 0.375, 1e-12);
}

TEST(FNorm, AgreesWithBOnOneLevel) {
  CoefficientTensor t(2, 2);
  t.insert(DyadicIndex({2, 0}, {0, 0}), 1.0);
  t.insert(DyadicIndex({2, 0}, {3, 0}), -2.0);
  t.insert(DyadicIndex({2, 0}, {1, 0}), 0.5);
  for (double p : {0.5, 1.0, 2.0, 3.0})
    for (double th : {0.5, 1.0, kInf})
      EXPECT_NEAR(f_norm(t, F(1.5, p, th)), b_norm(t, B(1.5, p, th)), 1e-12);
}

TEST(FNorm, NonnegativeAndZeroOnlyWhenEmpty) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({0}, {0}), 1e-3);
  EXPECT_GT(f_norm(t, F(0, 2, 2)), 0.0);
}

TEST(Norms, ExactHomogeneity) {
  CoefficientTensor t(2, 2);
  t.insert(DyadicIndex({0, 1}, {0, 1}), 0.3);
  t.insert(DyadicIndex({2, -1}, {1, 0}), -0.7);
  t.insert(DyadicIndex({1, 1}, {1, 0}), 0.11);
  for (double c : {0.25, 2.0, -8.0}) {
    EXPECT_EQ(b_norm(t.scaled(c), B(1, 2, 2)), std::abs(c) * b_norm(t, B(1, 2, 2)));
    EXPECT_EQ(f_norm(t.scaled(c), F(1, 1, kInf)), std::abs(c) * f_norm(t, F(1, 1, kInf)));
  }
}

TEST(Norms, TriangleInequalityForPAndThetaAtLeastOne) {
  CoefficientTensor a(1, 2), b(1, 2), s(1, 2);
  a.insert(DyadicIndex({0}, {0}), 1.0);
  a.insert(DyadicIndex({1}, {1}), 2.0);
  b.insert(DyadicIndex({1}, {1}), -1.0);
  b.insert(DyadicIndex({2}, {0}), 3.0);
  s.insert(DyadicIndex({0}, {0}), 1.0);
  s.insert(DyadicIndex({1}, {1}), 1.0);
  s.insert(DyadicIndex({2}, {0}), 3.0);
  for (const auto& bp : {B(1, 2, 2), B(0.5, 1, 1)})
    EXPECT_LE(b_norm(s, bp), b_norm(a, bp) + b_norm(b, bp) + 1e-12);
}

TEST(Params, Validation) {
  EXPECT_THROW(B(0, 0, 1).validate(), ConfigError);
  EXPECT_THROW(F(0, kInf, 1).validate(), ConfigError);
  EXPECT_THROW(BesovParams::parse_kind("x"), ConfigError);
  CoefficientTensor t(1, 2);
  EXPECT_THROW(b_norm(t, F(0, 2, 2)), ConfigError);
}

TEST(Breakdown, PerLevelWeights) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({0}, {0}), 1.0);
  t.insert(DyadicIndex({2}, {0}), 1.0);
  const auto l = level_breakdown(t, B(1, 2, 2));
  ASSERT_EQ(l.size(), 2u);
  EXPECT_NEAR(l[0].weighted, 1.0, 1e-15);
  EXPECT_NEAR(l[1].weighted, 2.0, 1e-15);
  EXPECT_EQ(l[1].entries, 1u);
}
