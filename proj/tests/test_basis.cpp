#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "faber/basis.hpp"
#include "faber/coefficients.hpp"
#include "faber/verify.hpp"

using namespace faber;

TEST(DualCoefficients, PublishedTables) {
  const auto a2 = dual_coefficients(2);
  const auto a3 = dual_coefficients(3);
  const auto& t2 = verify::detail::table_a2();
  const auto& t3 = verify::detail::table_a3();
  for (std::size_t n = 0; n < t2.size(); ++n) EXPECT_NEAR(a2[static_cast<long>(n)], t2[n], 5e-3);
  for (std::size_t n = 0; n < t3.size(); ++n) EXPECT_NEAR(a3[static_cast<long>(n)], t3[n], 5e-3);
}

TEST(DualCoefficients, SymmetricAndAlternating) {
  const auto a = dual_coefficients(2);
  for (long n = 1; n <= 20; ++n) {
    EXPECT_NEAR(a[n], a[-n], 1e-14);
    EXPECT_LT(a[n] * a[n - 1], 0.0);
  }
  EXPECT_EQ(a[41], 0.0);
  EXPECT_LT(a.tail_bound(), 1e-12);
}

TEST(DualCoefficients, Biorthogonality) {
  for (int m = 2; m <= 3; ++m) {
    const auto a = dual_coefficients(m);
    const auto g = wavelet_gram(m);
    const long hw = static_cast<long>(g.size() / 2);
    for (long k = -20; k <= 20; ++k) {
      double s = 0.0;
      for (long n = k - hw; n <= k + hw; ++n) s += a[n] * g[static_cast<std::size_t>(k - n + hw)];
      EXPECT_NEAR(s, k == 0 ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(DualCoefficients, GramIsSymmetric) {
  const auto g = wavelet_gram(3);
  ASSERT_EQ(g.size() % 2, 1u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], g[g.size() - 1 - i], 1e-15);
}

TEST(CardinalCoefficients, InterpolateIntegers) {
  for (int m = 1; m <= 3; ++m) {
    const auto sys = BasisSystem::build(m);
    for (long j = -6; j <= 6; ++j)
      EXPECT_NEAR(sys->eval(-1, 0, static_cast<double>(j)), j == 0 ? 1.0 : 0.0, 1e-12) << m;
  }
}

TEST(CardinalCoefficients, CubicTailRatio) {
  const auto c = cardinal_coefficients(4);
  const double r = std::sqrt(3.0) - 2.0;
  for (long n = 3; n <= 10; ++n) EXPECT_NEAR(c[n + 1] / c[n], r, 1e-9);
}

TEST(Basis, BoundaryKernelMatchesSeries) {
  const auto sys = BasisSystem::build(2);
  for (double x = -4.0; x <= 4.0; x += 0.37)
    EXPECT_NEAR(sys->boundary_kernel()(x), sys->eval(-1, 0, x), 1e-12);
}

TEST(Basis, TranslationAndDilation) {
  const auto sys = BasisSystem::build(2);
  for (double x = -1.0; x <= 3.0; x += 0.13) {
    EXPECT_NEAR(sys->eval(2, 3, x), sys->eval(0, 0, 4.0 * x - 3.0), 1e-14);
    EXPECT_NEAR(sys->eval(-1, 2, x), sys->eval(-1, 0, x - 2.0), 1e-14);
  }
}

TEST(Basis, MOneDetailFunctionIsAHat) {
  const auto sys = BasisSystem::build(1);
  // Level 0 is the piecewise linear hat on [0, 1].
  EXPECT_NEAR(std::abs(sys->eval(0, 0, 0.5)), std::abs(2.0 * sys->eval(0, 0, 0.25)), 1e-12);
  EXPECT_NEAR(sys->eval(0, 0, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(sys->eval(0, 0, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(sys->eval(0, 0, 1.5), 0.0, 1e-12);
}

TEST(Basis, EssentialSupportContainsTheMass) {
  const auto sys = BasisSystem::build(2);
  const auto s = essential_support(*sys, 1, 0, 1e-10);
  ASSERT_FALSE(s.empty);
  EXPECT_LT(s.lo, 0.0);
  EXPECT_GT(s.hi, 1.0);
  EXPECT_LT(std::abs(sys->eval(1, 0, s.lo - 0.5)), 1e-10);
  EXPECT_LT(std::abs(sys->eval(1, 0, s.hi + 0.5)), 1e-10);
}

TEST(Basis, RejectsBadInput) {
  EXPECT_THROW(BasisSystem::build(0), ConfigError);
  const auto sys = BasisSystem::build(2);
  EXPECT_THROW(eval_univariate(*sys, -2, 0, 0.0), ConfigError);
}
