#pragma once

// Discrete Besov (b) and Lizorkin-Triebel (f) sequence quasi-norms
//
//   b: ( sum_j 2^{theta r |j|_1} || sum_k lambda_{j,k} chi_{j,k} ||_p^theta )^{1/theta}
//   f: || ( sum_j 2^{theta r |j|_1} | sum_k lambda_{j,k} chi_{j,k} |^theta )^{1/theta} ||_p
//
// chi_{j,k} is the indicator of the box I_{j,k}: [2^-j k, 2^-j (k+1)] per
// direction with j >= 0 and [k - 1/2, k + 1/2] for j = -1. |j|_1 counts -1
// entries as -1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "faber/dyadic.hpp"
#include "faber/errors.hpp"
#include "faber/summation.hpp"
#include "faber/tensor.hpp"

namespace faber {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovParams {
  enum class Kind { b, f };
  double r = 0.0;
  double p = 2.0;
  double theta = 2.0;
  Kind kind = Kind::b;

  void validate() const {
    require(std::isfinite(r), "besov params: r must be finite");
    require(p > 0.0, "besov params: p must be > 0");
    require(theta > 0.0, "besov params: theta must be > 0");
    require(kind == Kind::b || std::isfinite(p), "besov params: the f-norm needs p < inf");
  }

  static Kind parse_kind(const std::string& s) {
    if (s == "b") return Kind::b;
    if (s == "f") return Kind::f;
    throw ConfigError("norm kind must be 'b' or 'f', got '" + s + "'");
  }
  [[nodiscard]] std::string kind_name() const { return kind == Kind::b ? "b" : "f"; }

  friend bool operator==(const BesovParams&, const BesovParams&) = default;
};

/// Product of the boxes I_{j_i,k_i}.
struct DyadicBox {
  std::vector<double> lo;
  std::vector<double> hi;

  static DyadicBox of(const MultiIndex& j, const MultiIndex& k) {
    DyadicBox b;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i] < 0) {
        b.lo.push_back(k[i] - 0.5);
        b.hi.push_back(k[i] + 0.5);
      } else {
        b.lo.push_back(std::ldexp(static_cast<double>(k[i]), -j[i]));
        b.hi.push_back(std::ldexp(static_cast<double>(k[i]) + 1.0, -j[i]));
      }
    }
    return b;
  }

  /// 2^{-sum max(j_i, 0)}.
  static double volume(const MultiIndex& j) {
    int s = 0;
    for (int v : j) s += std::max(v, 0);
    return std::ldexp(1.0, -s);
  }
};

/// 2^{r |j|_1}.
inline double level_weight(const MultiIndex& j, double r) { return std::exp2(r * l1(j)); }

/// || sum_k lambda_{j,k} chi_{j,k} ||_p for one level (boxes are disjoint).
inline double level_lp(const CoefficientTensor::Level& entries, const MultiIndex& j, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& [k, v] : entries) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms;
  terms.reserve(entries.size());
  for (const auto& [k, v] : entries) terms.push_back(abs_pow(v, p));
  return root(pairwise_sum(terms) * DyadicBox::volume(j), p);
}

/// Contribution of a single entry to the b-norm: the norm of the tensor
/// holding only that entry.
inline double entry_score(const MultiIndex& j, double value, const BesovParams& bp) {
  const double vol = DyadicBox::volume(j);
  const double v = std::isinf(bp.p) ? 1.0 : root(vol, bp.p);
  return std::abs(value) * level_weight(j, bp.r) * v;
}

struct LevelContribution {
  MultiIndex j;
  std::size_t entries = 0;
  /// 2^{r|j|_1} || sum_k lambda chi ||_p
  double weighted = 0.0;
};

/// Weighted per-level L_p norms, in level order.
inline std::vector<LevelContribution> level_breakdown(const CoefficientTensor& t,
                                                      const BesovParams& bp) {
  bp.validate();
  std::vector<LevelContribution> out;
  for (const auto& [j, entries] : t.levels())
    out.push_back({j, entries.size(), level_weight(j, bp.r) * level_lp(entries, j, bp.p)});
  return out;
}

/// Combines weighted level norms with the theta-sum (sup for theta = inf).
inline double theta_combine(std::span<const LevelContribution> levels, double theta) {
  if (std::isinf(theta)) {
    double m = 0.0;
    for (const auto& l : levels) m = std::max(m, l.weighted);
    return m;
  }
  std::vector<double> terms;
  terms.reserve(levels.size());
  for (const auto& l : levels) terms.push_back(abs_pow(l.weighted, theta));
  return root(pairwise_sum(terms), theta);
}

inline double b_norm(const CoefficientTensor& t, const BesovParams& bp) {
  require(bp.kind == BesovParams::Kind::b, "b_norm called with f-norm parameters");
  const auto levels = level_breakdown(t, bp);
  return theta_combine(levels, bp.theta);
}

/// Upper bound on the number of cells f_norm integrates over.
constexpr std::size_t kMaxNormCells = std::size_t{1} << 26;

inline double f_norm(const CoefficientTensor& t, const BesovParams& bp) {
  require(bp.kind == BesovParams::Kind::f, "f_norm called with b-norm parameters");
  bp.validate();
  if (t.empty()) return 0.0;
  const std::size_t d = t.dim();

  // Union of box edges per direction: the integrand is constant on each cell.
  std::vector<std::vector<double>> edges(d);
  t.for_each([&](const MultiIndex& j, const MultiIndex& k, double) {
    const auto b = DyadicBox::of(j, k);
    for (std::size_t i = 0; i < d; ++i) {
      edges[i].push_back(b.lo[i]);
      edges[i].push_back(b.hi[i]);
    }
  });
  std::size_t cells = 1;
  for (std::size_t i = 0; i < d; ++i) {
    auto& e = edges[i];
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    cells *= e.size() - 1;
    require(cells <= kMaxNormCells, "f_norm: tensor too fine for exact cell integration");
  }

  std::vector<double> acc(cells, 0.0);
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t i = d; i-- > 1;) stride[i - 1] = stride[i] * (edges[i].size() - 1);

  auto cell_range = [&](std::size_t i, double lo, double hi) {
    const auto& e = edges[i];
    const auto a = static_cast<std::size_t>(std::lower_bound(e.begin(), e.end(), lo) - e.begin());
    const auto b = static_cast<std::size_t>(std::lower_bound(e.begin(), e.end(), hi) - e.begin());
    return std::pair{a, b};
  };

  const bool sup = std::isinf(bp.theta);
  for (const auto& [j, entries] : t.levels()) {
    const double w = level_weight(j, bp.r);
    for (const auto& [k, v] : entries) {
      const double term = sup ? w * std::abs(v) : abs_pow(w * v, bp.theta);
      const auto box = DyadicBox::of(j, k);
      std::vector<std::pair<std::size_t, std::size_t>> range(d);
      for (std::size_t i = 0; i < d; ++i) range[i] = cell_range(i, box.lo[i], box.hi[i]);
      std::vector<std::size_t> pos(d);
      for (std::size_t i = 0; i < d; ++i) pos[i] = range[i].first;
      while (true) {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < d; ++i) flat += pos[i] * stride[i];
        acc[flat] = sup ? std::max(acc[flat], term) : acc[flat] + term;
        std::size_t i = d;
        while (i > 0 && pos[i - 1] + 1 == range[i - 1].second) {
          --i;
          pos[i] = range[i].first;
        }
        if (i == 0) break;
        ++pos[i - 1];
      }
    }
  }

  std::vector<double> terms(cells);
  std::vector<std::size_t> pos(d, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    double vol = 1.0;
    for (std::size_t i = 0; i < d; ++i) vol *= edges[i][pos[i] + 1] - edges[i][pos[i]];
    const double g = sup ? acc[c] : root(acc[c], bp.theta);
    terms[c] = abs_pow(g, bp.p) * vol;
    std::size_t i = d;
    while (i > 0 && pos[i - 1] + 2 == edges[i - 1].size()) pos[--i] = 0;
    if (i > 0) ++pos[i - 1];
  }
  return root(pairwise_sum(terms), bp.p);
}

/// Dispatches on params.kind.
inline double sequence_norm(const CoefficientTensor& t, const BesovParams& bp) {
  return bp.kind == BesovParams::Kind::b ? b_norm(t, bp) : f_norm(t, bp);
}

}  // namespace faber
