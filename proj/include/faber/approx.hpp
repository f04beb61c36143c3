#pragma once

// Nonlinear n-term approximation on coefficient tensors: hyperbolic cross
// projection, the level-wise greedy selections, an exhaustive best n-term
// oracle, L_q reconstruction error and rate fitting.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "faber/basis.hpp"
#include "faber/dyadic.hpp"
#include "faber/errors.hpp"
#include "faber/sampling.hpp"
#include "faber/seqnorm.hpp"
#include "faber/summation.hpp"
#include "faber/synthesis.hpp"
#include "faber/tensor.hpp"

namespace faber {

/// Entries with |j|_1 <= J.
inline CoefficientTensor hyperbolic_projection(const CoefficientTensor& t, int J) {
  CoefficientTensor out = t.like();
  for (const auto& [j, entries] : t.levels())
    if (l1(j) <= J) out.insert_level(j, entries);
  return out;
}

/// Number of stored entries with |j|_1 <= J.
inline std::size_t hyperbolic_count(const CoefficientTensor& t, int J) {
  std::size_t n = 0;
  for (const auto& [j, entries] : t.levels())
    if (l1(j) <= J) n += entries.size();
  return n;
}

/// Largest J whose hyperbolic cross holds at most n entries of t. Empty
/// layers do not count, so J runs up to just below the first layer that
/// overflows the budget (or to the top layer).
inline int base_level_for(const CoefficientTensor& t, std::size_t n) {
  if (t.empty()) return -static_cast<int>(t.dim());
  std::map<int, std::size_t> layer;
  for (const auto& [j, entries] : t.levels()) layer[l1(j)] += entries.size();
  std::size_t total = 0;
  for (const auto& [mu, count] : layer) {
    total += count;
    if (total > n) return mu - 1;
  }
  return layer.rbegin()->first;
}

/// The selection keeps at most kBudgetFactor * n indices.
constexpr std::size_t kBudgetFactor = 2;

enum class Variant { large_smoothness, small_smoothness };

inline Variant parse_variant(const std::string& s) {
  if (s == "large") return Variant::large_smoothness;
  if (s == "small") return Variant::small_smoothness;
  throw ConfigError("variant must be 'large' or 'small', got '" + s + "'");
}
inline std::string to_string(Variant v) {
  return v == Variant::large_smoothness ? "large" : "small";
}

enum class ScoreRule {
  lq,        // |lambda| 2^{-|j|_1 / max(q,1)}
  sequence,  // single-entry sequence norm |lambda| 2^{r|j|_1} vol^{1/p}
};

inline ScoreRule parse_score(const std::string& s) {
  if (s == "lq") return ScoreRule::lq;
  if (s == "sequence") return ScoreRule::sequence;
  throw ConfigError("score must be 'lq' or 'sequence', got '" + s + "'");
}
inline std::string to_string(ScoreRule s) { return s == ScoreRule::lq ? "lq" : "sequence"; }

struct SelectionPlan {
  std::size_t budget = 0;
  Variant variant = Variant::large_smoothness;
  /// Fully kept hyperbolic cross; chosen from the budget when empty.
  std::optional<int> base_level;
  /// Layers analyzed beyond the base level. The caller caps the tensor at
  /// |j|_1 <= J + tail_depth before selecting; greedy_select uses every layer
  /// it is given.
  int tail_depth = 3;
  ScoreRule score = ScoreRule::lq;
  /// Sequence norm used by ScoreRule::sequence and by the small-smoothness
  /// layer shares.
  BesovParams params;
};

struct ScoredIndex {
  DyadicIndex idx;
  double score = 0.0;
};

/// Orders by descending score, then by the index tie-break.
inline bool better(const ScoredIndex& a, const ScoredIndex& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.idx < b.idx;
}

inline double score_of(const MultiIndex& j, double v, const SelectionPlan& plan, double q) {
  if (plan.score == ScoreRule::sequence) return entry_score(j, v, plan.params);
  if (std::isinf(q)) return std::abs(v);
  return std::abs(v) * std::exp2(-static_cast<double>(l1(j)) / std::max(q, 1.0));
}

namespace detail {

// Entries of each hyperbolic layer, best first.
inline std::map<int, std::vector<ScoredIndex>> scored_layers(const CoefficientTensor& t,
                                                             const SelectionPlan& plan,
                                                             double q) {
  std::map<int, std::vector<ScoredIndex>> layers;
  t.for_each([&](const MultiIndex& j, const MultiIndex& k, double v) {
    layers[l1(j)].push_back({DyadicIndex(j, k), score_of(j, v, plan, q)});
  });
  for (auto& [mu, entries] : layers) std::sort(entries.begin(), entries.end(), better);
  return layers;
}

// Largest-remainder apportionment of `total` proportional to `weights`,
// never exceeding `caps`.
inline std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights,
                                          const std::vector<std::size_t>& caps) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> share(n, 0);
  std::vector<bool> open(n, true);
  std::size_t left = total;
  while (left > 0) {
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (open[i]) wsum += weights[i];
    if (wsum <= 0.0) break;
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t given = 0;
    std::vector<std::size_t> add(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!open[i]) continue;
      const double exact = static_cast<double>(left) * weights[i] / wsum;
      add[i] = static_cast<std::size_t>(std::floor(exact));
      given += add[i];
      rem.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(rem.begin(), rem.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; given < left && r < rem.size(); ++r, ++given) ++add[rem[r].second];
    // Clip at the caps and hand the excess to the remaining layers.
    std::size_t placed = 0;
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!open[i]) continue;
      const std::size_t room = caps[i] - share[i];
      if (add[i] >= room) {
        add[i] = room;
        open[i] = false;
        clipped = true;
      }
      share[i] += add[i];
      placed += add[i];
    }
    left -= placed;
    if (!clipped) break;
  }
  return share;
}

}  // namespace detail

/// Level-wise greedy selection. Returns a sorted index set of size at most
/// kBudgetFactor * budget.
inline IndexSet greedy_select(const CoefficientTensor& t, const SelectionPlan& plan,
                              double target_q) {
  require(target_q > 0.0, "greedy_select: target q must be positive");
  require(plan.tail_depth >= 0, "greedy_select: tail depth must be >= 0");
  if (plan.score == ScoreRule::sequence || plan.variant == Variant::small_smoothness)
    plan.params.validate();
  IndexSet out;
  const std::size_t n = plan.budget;
  if (n == 0 || t.empty()) return out;
  const std::size_t cap = kBudgetFactor * n;
  const auto layers = detail::scored_layers(t, plan, target_q);
  const int J = plan.base_level.value_or(base_level_for(t, n));

  if (plan.variant == Variant::large_smoothness) {
    std::vector<ScoredIndex> tail, rest;
    std::size_t head = 0;
    for (const auto& [mu, entries] : layers) {
      if (mu <= J) {
        for (const auto& e : entries) out.push_back(e.idx);
        head += entries.size();
        continue;
      }
      const double want = std::ceil(std::ldexp(static_cast<double>(n), J - mu));
      const auto take = static_cast<long>(std::min(entries.size(), static_cast<std::size_t>(want)));
      tail.insert(tail.end(), entries.begin(), entries.begin() + take);
      rest.insert(rest.end(), entries.begin() + take, entries.end());
    }
    if (head > cap) {
      // Only reachable with an explicit base level: keep the best head entries.
      std::vector<ScoredIndex> all;
      for (const auto& [mu, entries] : layers)
        if (mu <= J) all.insert(all.end(), entries.begin(), entries.end());
      std::sort(all.begin(), all.end(), better);
      out.clear();
      for (std::size_t i = 0; i < cap; ++i) out.push_back(all[i].idx);
    } else {
      // Scheduled tail picks first; allowance they leave unused goes to the
      // best remaining tail entries.
      std::sort(tail.begin(), tail.end(), better);
      std::sort(rest.begin(), rest.end(), better);
      for (std::size_t i = 0; i < tail.size() && out.size() < cap; ++i) out.push_back(tail[i].idx);
      for (std::size_t i = 0; i < rest.size() && out.size() < cap; ++i) out.push_back(rest[i].idx);
    }
  } else {
    // Shares proportional to each layer's part of the target sequence norm.
    BesovParams bp = plan.params;
    bp.kind = BesovParams::Kind::b;
    std::map<int, double> mass;
    for (const auto& lc : level_breakdown(t, bp)) {
      const double w = std::isinf(bp.theta) ? lc.weighted : abs_pow(lc.weighted, bp.theta);
      mass[l1(lc.j)] += w;
    }
    std::vector<double> weights;
    std::vector<std::size_t> caps;
    std::vector<const std::vector<ScoredIndex>*> refs;
    for (const auto& [mu, entries] : layers) {
      weights.push_back(mass[mu]);
      caps.push_back(entries.size());
      refs.push_back(&entries);
    }
    const auto share = detail::apportion(cap, weights, caps);
    for (std::size_t i = 0; i < refs.size(); ++i)
      for (std::size_t s = 0; s < share[i]; ++s) out.push_back((*refs[i])[s].idx);
  }
  normalize(out);
  return out;
}

struct BestNTerm {
  IndexSet selection;
  double residual = 0.0;
};

/// Largest tensor best_n_term_bruteforce accepts.
constexpr std::size_t kBruteForceLimit = 20;

/// Exhaustive minimum of the residual sequence norm over subsets of at most
/// n entries. Removing entries never decreases the residual, so only subsets
/// of exactly min(n, size) entries are enumerated.
inline BestNTerm best_n_term_bruteforce(const CoefficientTensor& t, std::size_t n,
                                        const BesovParams& bp) {
  const std::size_t N = t.size();
  require(N <= kBruteForceLimit, "best_n_term_bruteforce: tensor has " + std::to_string(N) +
                                     " entries, the limit is " +
                                     std::to_string(kBruteForceLimit));
  const auto all = t.indices();
  const std::size_t s = std::min(n, N);
  BestNTerm best{{}, sequence_norm(t, bp)};
  if (s == 0) return best;
  // Lexicographic enumeration of s-subsets; the first minimum wins ties.
  std::vector<std::size_t> pick(s);
  for (std::size_t i = 0; i < s; ++i) pick[i] = i;
  bool first = true;
  while (true) {
    IndexSet sel;
    for (auto i : pick) sel.push_back(all[i]);
    const double r = sequence_norm(t.without(sel), bp);
    if (first || r < best.residual) {
      best = {sel, r};
      first = false;
    }
    std::size_t i = s;
    while (i > 0 && pick[i - 1] == N - s + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < s; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

/// Residual sequence norm after keeping `selection`.
inline double residual_norm(const CoefficientTensor& t, const IndexSet& selection,
                            const BesovParams& bp) {
  return sequence_norm(t.without(selection), bp);
}

/// L_q norm of grid values by the midpoint rule with cell volume `cell`.
inline double grid_lq(std::span<const double> values, double cell, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = abs_pow(values[i], q);
  return root(pairwise_sum(terms) * cell, q);
}

struct ErrorGrid {
  TensorGrid grid;
  std::vector<std::size_t> cells;
  std::vector<double> spacing;
  double cell_volume = 1.0;
};

/// Midpoint grid on K with at least 2^{level_i + 1} cells per unit length in
/// direction i (and at least `min_cells` cells).
inline ErrorGrid make_error_grid(const Domain& K, const std::vector<int>& finest,
                                 std::size_t min_cells = 0) {
  K.validate();
  ErrorGrid g;
  for (std::size_t i = 0; i < K.dim(); ++i) {
    const double width = K.hi[i] - K.lo[i];
    const int lvl = i < finest.size() ? std::max(finest[i], 0) : 0;
    const auto need = static_cast<std::size_t>(std::ceil(std::ldexp(width, lvl + 1)));
    g.cells.push_back(std::max<std::size_t>({need, min_cells, 1}));
    g.spacing.push_back(width / static_cast<double>(g.cells.back()));
    g.cell_volume *= g.spacing.back();
  }
  g.grid = TensorGrid::midpoints(K, g.cells);
  return g;
}

/// f sampled on the grid points, row-major.
inline std::vector<double> sample_on_grid(const SampledFunction& f, const TensorGrid& grid) {
  std::vector<double> out(grid.size());
  grid.for_each([&](std::size_t i, std::span<const double> x) { out[i] = f(x); });
  return out;
}

struct ErrorResult {
  double error = 0.0;
  std::vector<std::size_t> cells;
  std::vector<double> spacing;
};

/// || f - sum_{selection} lambda s ||_{L_q(K)} on a prepared grid with the
/// target values already sampled.
inline double reconstruction_error(std::span<const double> f_values, const ErrorGrid& g,
                                   const CoefficientTensor& t, const IndexSet* selection,
                                   const BasisSystem& sys, double q, unsigned threads = 1) {
  require(q > 0.0, "reconstruction_error: q must be positive");
  require(f_values.size() == g.grid.size(), "reconstruction_error: grid/value size mismatch");
  Domain box;
  for (const auto& a : g.grid.axes) {
    box.lo.push_back(a.front());
    box.hi.push_back(a.back());
  }
  const Expansion e(t, sys, box, selection);
  auto diff = e.on_grid(g.grid, threads);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f_values[i] - diff[i];
  return grid_lq(diff, g.cell_volume, q);
}

/// Convenience form that builds the grid at `min_cells` resolution, raised
/// to twice the finest selected level if needed.
inline ErrorResult reconstruction_error(const SampledFunction& f, const CoefficientTensor& t,
                                        const IndexSet* selection, const BasisSystem& sys,
                                        double q, const Domain& K, std::size_t min_cells = 0,
                                        unsigned threads = 1) {
  const auto finest = selection ? t.restricted(*selection).finest_levels() : t.finest_levels();
  const auto g = make_error_grid(K, finest, min_cells);
  const auto fv = sample_on_grid(f, g.grid);
  return {reconstruction_error(fv, g, t, selection, sys, q, threads), g.cells, g.spacing};
}

struct ErrorRow {
  std::size_t n = 0;
  double error = 0.0;
  std::size_t samples = 0;
  std::size_t kept = 0;
  double ms = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;

  void add(const ErrorRow& r) {
    require(rows.empty() || r.n > rows.back().n, "error report: n must be strictly increasing");
    require(r.error >= 0.0, "error report: errors must be nonnegative");
    rows.push_back(r);
  }
};

struct RateFit {
  double slope = 0.0;
  double log_exponent = 0.0;
  double intercept = 0.0;
  /// Root mean square of the log-error residuals.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Least squares  log e = c + slope log n + log_exponent log log n  over
/// rows with n >= 2 and e > 0.
inline RateFit rate_fit(const ErrorReport& report, std::size_t d = 1) {
  (void)d;
  std::vector<const ErrorRow*> use;
  for (const auto& r : report.rows)
    if (r.n >= 2 && r.error > 0.0 && std::isfinite(r.error)) use.push_back(&r);
  if (use.size() < 5) throw NumericalError("rate_fit: need at least 5 usable rows");
  const double lo = static_cast<double>(use.front()->n), hi = static_cast<double>(use.back()->n);
  if (hi / lo < 100.0) throw NumericalError("rate_fit: n must span at least two decades");
  Eigen::MatrixXd A(use.size(), 3);
  Eigen::VectorXd y(use.size());
  for (std::size_t i = 0; i < use.size(); ++i) {
    const double ln = std::log(static_cast<double>(use[i]->n));
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = ln;
    A(static_cast<Eigen::Index>(i), 2) = std::log(ln);
    y(static_cast<Eigen::Index>(i)) = std::log(use[i]->error);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 3) throw NumericalError("rate_fit: degenerate design matrix");
  const Eigen::VectorXd c = qr.solve(y);
  const Eigen::VectorXd res = A * c - y;
  return {c(1), c(2), c(0), std::sqrt(res.squaredNorm() / static_cast<double>(use.size())),
          use.size()};
}

/// Power-law-only fit log e = c + slope log n (reported next to the full fit).
inline RateFit power_fit(const ErrorReport& report) {
  std::vector<const ErrorRow*> use;
  for (const auto& r : report.rows)
    if (r.n >= 2 && r.error > 0.0 && std::isfinite(r.error)) use.push_back(&r);
  if (use.size() < 2) throw NumericalError("power_fit: need at least 2 usable rows");
  Eigen::MatrixXd A(use.size(), 2);
  Eigen::VectorXd y(use.size());
  for (std::size_t i = 0; i < use.size(); ++i) {
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = std::log(static_cast<double>(use[i]->n));
    y(static_cast<Eigen::Index>(i)) = std::log(use[i]->error);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 2) throw NumericalError("power_fit: degenerate design matrix");
  const Eigen::VectorXd c = qr.solve(y);
  const Eigen::VectorXd res = A * c - y;
  return {c(1), 0.0, c(0), std::sqrt(res.squaredNorm() / static_cast<double>(use.size())),
          use.size()};
}

}  // namespace faber
