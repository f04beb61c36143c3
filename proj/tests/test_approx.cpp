#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "faber/analysis.hpp"
#include "faber/approx.hpp"
#include "faber/testfn.hpp"
#include "faber/verify.hpp"

using namespace faber;

namespace {

CoefficientTensor layered() {
  // d = 2, one entry per level with |j|_1 in {-2, ..., 5}.
  CoefficientTensor t(2, 2);
  const std::vector<MultiIndex> js{{-1, -1}, {-1, 0}, {0, 0}, {1, 0}, {0, 1},
                                   {2, 0},   {1, 2},  {2, 2}, {3, 2}, {-1, 3}};
  double v = 1.0;
  for (const auto& j : js) {
    t.insert(DyadicIndex(j, {0, 0}), v);
    v *= 0.5;
  }
  return t;
}

SelectionPlan plan_for(std::size_t n, Variant v, ScoreRule s = ScoreRule::lq) {
  SelectionPlan p;
  p.budget = n;
  p.variant = v;
  p.score = s;
  p.params = {1.0, 2.0, 2.0, BesovParams::Kind::b};
  return p;
}

}  // namespace

TEST(Hyperbolic, ProjectionCounts) {
  const auto t = layered();
  EXPECT_TRUE(hyperbolic_projection(t, -3).empty());
  EXPECT_EQ(hyperbolic_projection(t, 5).size(), t.size());
  // levels with |j|_1 <= 2: (-1,-1), (-1,0), (0,0), (1,0), (0,1), (2,0), (-1,3)
  EXPECT_EQ(hyperbolic_count(t, 2), 7u);
  EXPECT_EQ(hyperbolic_projection(t, 2).size(), 7u);
}

TEST(Hyperbolic, BaseLevel) {
  const auto t = layered();
  EXPECT_EQ(base_level_for(t, 0), -3);
  EXPECT_EQ(base_level_for(t, 1), -2);
  EXPECT_EQ(base_level_for(t, 7), 2);
  EXPECT_EQ(base_level_for(t, 100), 5);
}

TEST(Greedy, WholeTensorWhenBudgetIsLarge) {
  const auto t = layered();
  for (auto v : {Variant::large_smoothness, Variant::small_smoothness})
    EXPECT_EQ(greedy_select(t, plan_for(t.size(), v), 2.0), t.indices());
}

TEST(Greedy, UniqueMaximumAtBudgetOne) {
  CoefficientTensor t(1, 2);
  t.insert(DyadicIndex({2}, {0}), 0.1);
  t.insert(DyadicIndex({2}, {1}), 5.0);
  t.insert(DyadicIndex({2}, {2}), 0.2);
  for (auto v : {Variant::large_smoothness, Variant::small_smoothness}) {
    const auto sel = greedy_select(t, plan_for(1, v), 2.0);
    ASSERT_FALSE(sel.empty());
    EXPECT_EQ(sel.front(), DyadicIndex({2}, {1}));
  }
}

TEST(Greedy, NeverExceedsTwiceTheBudget) {
  std::mt19937_64 rng(31);
  for (int s = 0; s < 20; ++s) {
    const auto t = verify::detail::random_tensor(rng, 2, 12, 1.0);
    for (std::size_t n = 0; n <= 8; ++n)
      for (auto v : {Variant::large_smoothness, Variant::small_smoothness})
        EXPECT_LE(greedy_select(t, plan_for(n, v), 2.0).size(), 2 * n);
  }
}

TEST(Greedy, Deterministic) {
  std::mt19937_64 rng(37);
  const auto t = verify::detail::random_tensor(rng, 2, 12, 0.5);
  for (auto v : {Variant::large_smoothness, Variant::small_smoothness})
    EXPECT_EQ(greedy_select(t, plan_for(4, v), 2.0), greedy_select(t, plan_for(4, v), 2.0));
}

TEST(Greedy, CloseToBruteForceOnTwelveEntries) {
  std::mt19937_64 rng(41);
  const auto t = verify::detail::random_tensor(rng, 2, 12, 1.0);
  for (auto v : {Variant::large_smoothness, Variant::small_smoothness}) {
    auto plan = plan_for(4, v, ScoreRule::sequence);
    const auto best = best_n_term_bruteforce(t, 4, plan.params);
    const auto sel = greedy_select(t, plan, 2.0);
    EXPECT_LE(residual_norm(t, sel, plan.params), 1.25 * best.residual);
  }
}

TEST(BruteForce, Trivial) {
  std::mt19937_64 rng(43);
  const auto t = verify::detail::random_tensor(rng, 1, 6, 1.0);
  const BesovParams bp{1.0, 2.0, 2.0, BesovParams::Kind::b};
  EXPECT_EQ(best_n_term_bruteforce(t, 0, bp).residual, b_norm(t, bp));
  EXPECT_EQ(best_n_term_bruteforce(t, 6, bp).residual, 0.0);
}

TEST(BruteForce, SingleLevelPicksLargest) {
  CoefficientTensor t(1, 2);
  const double v[] = {0.3, -0.9, 0.1, 0.6, -0.2, 0.8, 0.05, 0.4};
  for (int k = 0; k < 8; ++k) t.insert(DyadicIndex({3}, {k}), v[k]);
  for (double p : {0.5, 1.0, 2.0})
    for (double th : {1.0, kInf}) {
      const auto best = best_n_term_bruteforce(t, 3, {0.5, p, th, BesovParams::Kind::b});
      EXPECT_EQ(best.selection,
                (IndexSet{DyadicIndex({3}, {1}), DyadicIndex({3}, {3}), DyadicIndex({3}, {5})}));
    }
}

TEST(BruteForce, RefusesLargeTensors) {
  std::mt19937_64 rng(47);
  const auto t = verify::detail::random_tensor(rng, 2, 21, 1.0);
  EXPECT_THROW(best_n_term_bruteforce(t, 2, {}), ConfigError);
}

TEST(Error, FullSelectionReproducesSpline) {
  const auto sys = BasisSystem::build(2);
  const auto tf = tensor_bspline(2, 4, 2);
  const auto t = analyze(tf.f, *sys, CapSpec::max_level(2));
  const auto sel = t.indices();
  const auto r = reconstruction_error(tf.f, t, &sel, *sys, 2.0, Domain::cube(2), 64);
  EXPECT_LT(r.error, 1e-7);
}

TEST(Error, EmptySelectionGivesTheFunctionNorm) {
  const auto sys = BasisSystem::build(2);
  const auto tf = tensor_bspline(1, 2, 0);  // hat on [0, 2] cut to [0, 1]: f = x
  const auto t = analyze(tf.f, *sys, CapSpec::max_level(1));
  const IndexSet none;
  const auto r = reconstruction_error(tf.f, t, &none, *sys, 2.0, Domain::cube(1), 4096);
  EXPECT_NEAR(r.error, std::sqrt(1.0 / 3.0), 1e-6);
}

TEST(Error, GridLq) {
  const double v[] = {1.0, -2.0, 2.0};
  EXPECT_NEAR(grid_lq(v, 0.5, 2.0), std::sqrt(4.5), 1e-15);
  EXPECT_EQ(grid_lq(v, 0.5, kInf), 2.0);
  EXPECT_NEAR(grid_lq(v, 0.5, 1.0), 2.5, 1e-15);
}

TEST(Report, RequiresIncreasingN) {
  ErrorReport r;
  r.add({1, 1.0});
  EXPECT_THROW(r.add({1, 0.5}), ConfigError);
  EXPECT_THROW(r.add({2, -1.0}), ConfigError);
}

TEST(RateFit, RecoversSyntheticRate) {
  ErrorReport r;
  for (std::size_t n = 16; n <= 8192; n *= 2) {
    const double ln = std::log(static_cast<double>(n));
    r.add({n, 3.0 * std::pow(static_cast<double>(n), -2.0) * std::pow(ln, 1.5)});
  }
  const auto f = rate_fit(r, 2);
  EXPECT_NEAR(f.slope, -2.0, 1e-9);
  EXPECT_NEAR(f.log_exponent, 1.5, 1e-8);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-8);
  EXPECT_LT(f.residual, 1e-10);
  EXPECT_GT(power_fit(r).slope, -2.0);
}

TEST(RateFit, RejectsShortReports) {
  ErrorReport r;
  for (std::size_t n = 16; n <= 64; n *= 2) r.add({n, 1.0 / static_cast<double>(n)});
  EXPECT_THROW(rate_fit(r), NumericalError);
  ErrorReport narrow;
  for (std::size_t n = 10; n <= 60; n += 10) narrow.add({n, 1.0 / static_cast<double>(n)});
  EXPECT_THROW(rate_fit(narrow), NumericalError);
}

TEST(Enums, ParseAndPrint) {
  EXPECT_EQ(parse_variant("large"), Variant::large_smoothness);
  EXPECT_EQ(to_string(parse_variant("small")), "small");
  EXPECT_EQ(parse_score("sequence"), ScoreRule::sequence);
  EXPECT_THROW(parse_variant("medium"), ConfigError);
}
