#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "faber/analysis.hpp"
#include "faber/synthesis.hpp"
#include "faber/testfn.hpp"
#include "faber/verify.hpp"

using namespace faber;

namespace {

SampledFunction poly1(std::vector<double> c) {
  return SampledFunction(
      [c](std::span<const double> x) {
        double v = 0.0;
        for (std::size_t r = c.size(); r-- > 0;) v = v * x[0] + c[r];
        return v;
      },
      Domain::cube(1, -10, 10), Extension::callback);
}

}  // namespace

TEST(SamplePoint, Values) {
  EXPECT_EQ(sample_point(-1, 3, 2), 3.0);
  EXPECT_EQ(sample_point(0, 0, 1), 0.5);
  EXPECT_EQ(sample_point(2, 1, 3), 5.0 / 8.0);
}

TEST(MixedDifference, SecondDifferenceOfSquare) {
  const auto f = poly1({0, 0, 1});
  const std::size_t e[] = {0};
  const double h[] = {0.25};
  const double x[] = {1.0};
  EXPECT_NEAR(mixed_difference(f, 2, e, h, x), 2.0 * 0.25 * 0.25, 1e-15);
  EXPECT_NEAR(mixed_difference(f, 3, e, h, x), 0.0, 1e-14);
}

TEST(MixedDifference, EmptySetIsTheValue) {
  const auto f = poly1({2, 1});
  const double x[] = {3.0};
  EXPECT_EQ(mixed_difference(f, 4, {}, std::span<const double>(x, 1), x), 5.0);
}

TEST(StencilWeights, AnnihilateLowDegree) {
  for (int m = 1; m <= 3; ++m) {
    const auto w = detail_stencil_weights(m);
    ASSERT_EQ(w.size(), static_cast<std::size_t>(4 * m - 1));
    for (int a = 0; a < 2 * m; ++a) {
      double s = 0.0;
      for (std::size_t t = 0; t < w.size(); ++t) s += w[t] * std::pow(static_cast<double>(t), a);
      EXPECT_NEAR(s, 0.0, 1e-9) << m << " " << a;
    }
  }
}

TEST(Lambda, LevelMinusOneIsASample) {
  const auto sys = BasisSystem::build(3);
  const auto f = poly1({0.3, -1, 0, 0, 0, 0, 0, 2});
  for (int k = -3; k <= 3; ++k) {
    const double x = k;
    EXPECT_EQ(lambda(f, *sys, DyadicIndex({-1}, {k})), f(std::span(&x, 1)));
  }
}

TEST(Lambda, AnnihilatesPolynomials) {
  for (int m = 1; m <= 3; ++m) {
    const auto sys = BasisSystem::build(m);
    std::vector<double> c(2 * m);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 1.0 / (1.0 + i);
    const auto f = poly1(c);
    for (int j = 0; j <= 4; ++j)
      EXPECT_NEAR(lambda(f, *sys, DyadicIndex({j}, {1})), 0.0, 1e-9) << m << " " << j;
  }
}

TEST(Lambda, MatchesLiteralSum) {
  std::mt19937_64 rng(17);
  for (int m = 1; m <= 3; ++m) {
    const auto sys = BasisSystem::build(m);
    SampledFunction f(
        [](std::span<const double> x) { return std::exp(x[0]) * std::sin(2.0 * x[1] + 0.3); },
        Domain::cube(2, -8, 8), Extension::callback);
    for (int s = 0; s < 10; ++s) {
      const int j0 = std::uniform_int_distribution<int>(-1, 3)(rng);
      const int j1 = std::uniform_int_distribution<int>(-1, 3)(rng);
      const DyadicIndex idx({j0, j1}, {s % 3, 1 - s % 2});
      EXPECT_NEAR(lambda(f, *sys, idx), verify::detail::lambda_oracle(f, m, idx), 1e-10);
    }
  }
}

TEST(Lambda, DimensionMismatchThrows) {
  const auto sys = BasisSystem::build(2);
  EXPECT_THROW(lambda(poly1({1}), *sys, DyadicIndex({0, 0}, {0, 0})), ConfigError);
}

TEST(Analyze, ReproducesTensorSpline) {
  const auto sys = BasisSystem::build(2);
  const auto tf = tensor_bspline(2, 4, 2);
  const auto t = analyze(tf.f, *sys, CapSpec::max_level(2));
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 30; ++s) {
    const double x[] = {u(rng), u(rng)};
    EXPECT_NEAR(synthesize(t, *sys, x), tf.f(x), 1e-9);
  }
}

TEST(Analyze, RespectsCapAndDropTolerance) {
  const auto sys = BasisSystem::build(2);
  const auto f = smooth_bump(2).f;
  const auto t = analyze(f, *sys, CapSpec::hyperbolic(3));
  EXPECT_GT(t.size(), 0u);
  for (const auto& [j, entries] : t.levels()) {
    EXPECT_LE(l1(j), 3);
    for (const auto& [k, v] : entries) EXPECT_GE(std::abs(v), 1e-14);
  }
  EXPECT_GT(t.samples_used, 0u);
  EXPECT_LE(static_cast<double>(t.samples_used),
            estimated_samples(CapSpec::hyperbolic(3), f.domain(), 2));
}

TEST(Analyze, ThreadCountDoesNotChangeResult) {
  const auto sys = BasisSystem::build(2);
  const auto f = kink(2, 1.5).f;
  const auto a = analyze(f, *sys, CapSpec::hyperbolic(4), {1, 1e-14});
  const auto b = analyze(f, *sys, CapSpec::hyperbolic(4), {3, 1e-14});
  EXPECT_EQ(a.levels(), b.levels());
}

TEST(Analyze, MemoizedCoefficientsMatchDirect) {
  const auto sys = BasisSystem::build(3);
  const auto f = smooth_bump(2).f;
  const auto t = analyze(f, *sys, CapSpec::hyperbolic(2));
  t.for_each([&](const MultiIndex& j, const MultiIndex& k, double v) {
    EXPECT_NEAR(v, lambda(f, *sys, DyadicIndex(j, k)), 1e-15);
  });
}

TEST(StencilRange, CoversTheDomain) {
  const auto [lo, hi] = stencil_k_range(2, 2, 0.0, 1.0);
  EXPECT_LE(lo, 0);
  EXPECT_GE(hi, 3);
}
