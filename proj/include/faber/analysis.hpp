#pragma once

// Sample-based coefficient functional lambda_{2m;j,k}(f) and level-wise
// analysis into a CoefficientTensor.
//
// For a direction with j_i >= 0 the functional combines 2m-th differences
// with step h = 2^{-j_i-1} at the points x_{j;k,l} = (2k + l) h, weighted by
// (-1)^l N_{2m}(l + 1), l = 0..2m-2. Expanding the difference, all samples
// fall on (2k + t) h for t = 0..4m-2, so each direction reduces to one
// stencil of 4m-1 weights. Directions with j_i = -1 contribute the single
// sample f(.., k_i, ..) with weight 1 (the N_{2m}(l+1) weights sum to one).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "faber/basis.hpp"
#include "faber/dyadic.hpp"
#include "faber/errors.hpp"
#include "faber/parallel.hpp"
#include "faber/ppoly.hpp"
#include "faber/sampling.hpp"
#include "faber/tensor.hpp"

namespace faber {

/// x_{j;k,l}: k for j = -1, (2k + l) / 2^{j+1} otherwise.
inline double sample_point(int j, long k, int l) {
  if (j < 0) return static_cast<double>(k);
  return std::ldexp(static_cast<double>(2 * k + l), -(j + 1));
}

/// Delta^{order, e}_h f(x): iterated order-th forward differences in the
/// directions listed in e; uses (order+1)^{|e|} evaluations.
inline double mixed_difference(const SampledFunction& f, int order,
                               std::span<const std::size_t> e, std::span<const double> h,
                               std::span<const double> x) {
  require(order >= 0, "mixed_difference: order must be >= 0");
  if (e.empty()) return f(x);
  const std::size_t dir = e.front();
  require(dir < x.size() && dir < h.size(), "mixed_difference: direction out of range");
  require(h[dir] > 0.0, "mixed_difference: steps must be positive");
  std::vector<double> y(x.begin(), x.end());
  double s = 0.0;
  for (int r = 0; r <= order; ++r) {
    y[dir] = x[dir] + r * h[dir];
    const double sign = ((order - r) % 2) ? -1.0 : 1.0;
    s += sign * binomial(order, r) * mixed_difference(f, order, e.subspan(1), h, y);
  }
  return s;
}

/// Weights of the per-direction stencil: w_t for the sample (2k + t) h,
/// t = 0..4m-2.
inline std::vector<double> detail_stencil_weights(int m) {
  const auto n2m = bspline(2 * m);
  std::vector<double> w(static_cast<std::size_t>(4 * m - 1), 0.0);
  for (int l = 0; l <= 2 * m - 2; ++l) {
    const double nl = ((l % 2) ? -1.0 : 1.0) * n2m(static_cast<double>(l + 1));
    for (int i = 0; i <= 2 * m; ++i) {
      const double di = ((i % 2) ? -1.0 : 1.0) * binomial(2 * m, i);
      w[static_cast<std::size_t>(l + i)] += nl * di;
    }
  }
  return w;
}

namespace detail {

struct AxisStencil {
  std::vector<std::int64_t> numerators;  // at denominator 2^D
  std::vector<double> weights;
};

inline AxisStencil axis_stencil(int j, long k, int log2_den, const std::vector<double>& w) {
  AxisStencil s;
  if (j < 0) {
    s.numerators.push_back(static_cast<std::int64_t>(k) << log2_den);
    s.weights.push_back(1.0);
    return s;
  }
  const int shift = log2_den - j - 1;
  for (std::size_t t = 0; t < w.size(); ++t) {
    s.numerators.push_back((2 * static_cast<std::int64_t>(k) + static_cast<std::int64_t>(t))
                           << shift);
    s.weights.push_back(w[t]);
  }
  return s;
}

// Sum over the tensor product of axis stencils, sample(key) * prod weights.
template <class Sample>
double contract(const std::vector<AxisStencil>& axes, Sample&& sample) {
  const std::size_t d = axes.size();
  std::vector<std::size_t> pos(d, 0);
  DyadicKey key;
  key.numerators.resize(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      w *= axes[i].weights[pos[i]];
      key.numerators[i] = axes[i].numerators[pos[i]];
    }
    total += w * sample(key);
    std::size_t i = d;
    while (i > 0 && pos[i - 1] + 1 == axes[i - 1].weights.size()) pos[--i] = 0;
    if (i == 0) return total;
    ++pos[i - 1];
  }
}

inline int denominator_for(const DyadicIndex& idx) {
  int top = -1;
  for (int v : idx.j) top = std::max(top, v);
  return top + 1;
}

}  // namespace detail

/// lambda_{2m;j,k}(f), evaluating f directly (no memo).
inline double lambda(const SampledFunction& f, const BasisSystem& sys, const DyadicIndex& idx) {
  require(idx.dim() == f.dim(), "lambda: index dimension does not match the function");
  const auto w = detail_stencil_weights(sys.m());
  const int den = detail::denominator_for(idx);
  std::vector<detail::AxisStencil> axes;
  for (std::size_t i = 0; i < idx.dim(); ++i)
    axes.push_back(detail::axis_stencil(idx.j[i], idx.k[i], den, w));
  std::vector<double> x(idx.dim());
  return detail::contract(axes, [&](const DyadicKey& key) {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::ldexp(static_cast<double>(key.numerators[i]), -den);
    return f(x);
  });
}

/// Translations k at level j whose sample stencil meets [a, b].
inline std::pair<long, long> stencil_k_range(int j, int m, double a, double b) {
  if (j < 0) return {static_cast<long>(std::ceil(a)), static_cast<long>(std::floor(b))};
  return {static_cast<long>(std::ceil(std::ldexp(a, j))) - (2 * m - 1),
          static_cast<long>(std::floor(std::ldexp(b, j)))};
}

/// Upper bound on the number of distinct samples an analysis would draw.
inline double estimated_samples(const CapSpec& cap, const Domain& dom, int m) {
  double total = 0.0;
  for (const auto& j : cap.levels(dom.dim())) {
    double c = 1.0;
    for (std::size_t i = 0; i < dom.dim(); ++i) {
      const double w = dom.hi[i] - dom.lo[i];
      c *= j[i] < 0 ? std::floor(w) + 1.0 : std::ldexp(w, j[i] + 1) + 4.0 * m;
    }
    total += c;
  }
  return total;
}

struct AnalysisOptions {
  unsigned threads = 1;
  double drop_tol = 1e-14;
};

/// Computes lambda for every index admitted by the cap whose stencil meets
/// the domain cube. Samples are memoized on exact dyadic keys;
/// samples_used is the number of distinct evaluator calls.
inline CoefficientTensor analyze(const SampledFunction& f, const BasisSystem& sys,
                                 const CapSpec& cap, const AnalysisOptions& opt = {}) {
  const std::size_t d = f.dim();
  const int m = sys.m();
  const auto levels = cap.levels(d);
  const int den = std::max(0, cap.max_direction_level(d) + 1);
  require(den <= 52, "analyze: level cap too deep for exact dyadic keys");
  const auto w = detail_stencil_weights(m);
  SampleMemo memo(f, den);
  const auto& dom = f.domain();

  std::vector<CoefficientTensor::Level> results(levels.size());
  parallel_for(levels.size(), opt.threads, [&](std::size_t li) {
    const auto& j = levels[li];
    std::vector<std::pair<long, long>> range(d);
    for (std::size_t i = 0; i < d; ++i) {
      range[i] = stencil_k_range(j[i], m, dom.lo[i], dom.hi[i]);
      if (range[i].first > range[i].second) return;
    }
    MultiIndex k(d);
    for (std::size_t i = 0; i < d; ++i) k[i] = static_cast<int>(range[i].first);
    std::vector<detail::AxisStencil> axes(d);
    auto& out = results[li];
    while (true) {
      for (std::size_t i = 0; i < d; ++i) axes[i] = detail::axis_stencil(j[i], k[i], den, w);
      const double v = detail::contract(axes, [&](const DyadicKey& key) { return memo.get(key); });
      if (std::abs(v) >= opt.drop_tol) out.emplace(k, v);
      std::size_t i = d;
      while (i > 0 && k[i - 1] == range[i - 1].second) {
        --i;
        k[i] = static_cast<int>(range[i].first);
      }
      if (i == 0) break;
      ++k[i - 1];
    }
  });

  CoefficientTensor t(d, m, opt.drop_tol);
  t.cap = cap;
  t.domain = dom;
  for (std::size_t li = 0; li < levels.size(); ++li)
    t.insert_level(levels[li], std::move(results[li]));
  t.samples_used = memo.size();
  return t;
}

}  // namespace faber
