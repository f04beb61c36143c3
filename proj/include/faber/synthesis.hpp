#pragma once

// Evaluation of coefficient expansions sum lambda_{j,k} s_{2m;j,k}.
//
// synthesize() is the literal sum over stored entries with support pruning.
// Expansion rewrites every level in the compactly supported generators:
//   sum_k lambda_k s_{j,k}(x) = sum_l mu_l g_j(x, l),  mu = lambda * h,
// where h is the dual (a_n) or cardinal (c_n) sequence per direction and
// g_j(x, l) is sign * v_{2m}(2^j x - l) or N_{2m}(x + m - l). Each point then
// touches at most (2m)^d generators per level, and tensor grids are handled
// by mode products.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "faber/basis.hpp"
#include "faber/errors.hpp"
#include "faber/parallel.hpp"
#include "faber/sampling.hpp"
#include "faber/tensor.hpp"

namespace faber {

/// Tensor product of per-axis coordinate lists; the last axis varies fastest.
struct TensorGrid {
  std::vector<std::vector<double>> axes;

  [[nodiscard]] std::size_t dim() const noexcept { return axes.size(); }
  [[nodiscard]] std::size_t size() const noexcept {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
  }

  /// Cell midpoints of `cells` equal cells per axis.
  static TensorGrid midpoints(const Domain& box, std::vector<std::size_t> cells) {
    TensorGrid g;
    for (std::size_t i = 0; i < box.dim(); ++i) {
      const double h = (box.hi[i] - box.lo[i]) / static_cast<double>(cells[i]);
      std::vector<double> a(cells[i]);
      for (std::size_t c = 0; c < cells[i]; ++c) a[c] = box.lo[i] + (static_cast<double>(c) + 0.5) * h;
      g.axes.push_back(std::move(a));
    }
    return g;
  }

  /// n + 1 equispaced nodes per axis including both ends.
  static TensorGrid nodes(const Domain& box, std::size_t n) {
    TensorGrid g;
    for (std::size_t i = 0; i < box.dim(); ++i) {
      std::vector<double> a(n + 1);
      for (std::size_t c = 0; c <= n; ++c)
        a[c] = box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(c) / static_cast<double>(n);
      g.axes.push_back(std::move(a));
    }
    return g;
  }

  /// Visits every point in row-major order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    const std::size_t d = dim();
    std::vector<std::size_t> pos(d, 0);
    std::vector<double> x(d);
    for (std::size_t flat = 0, n = size(); flat < n; ++flat) {
      for (std::size_t i = 0; i < d; ++i) x[i] = axes[i][pos[i]];
      fn(flat, std::span<const double>(x));
      std::size_t i = d;
      while (i > 0 && pos[i - 1] + 1 == axes[i - 1].size()) pos[--i] = 0;
      if (i > 0) ++pos[i - 1];
    }
  }
};

/// Literal S = sum over the selected entries (all entries by default).
inline double synthesize(const CoefficientTensor& tensor, const BasisSystem& sys,
                         std::span<const double> x, const IndexSet* selection = nullptr,
                         double support_tol = 1e-14) {
  require(x.size() == tensor.dim(), "synthesize: point dimension mismatch");
  const auto detail_t = sys.detail_series().support(support_tol);
  const auto coarse_t = sys.coarse_series().support(support_tol);
  auto term = [&](const MultiIndex& j, const MultiIndex& k, double value) {
    double v = value;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = sys.local_argument(j[i], k[i], x[i]);
      if (!(j[i] >= 0 ? detail_t : coarse_t).contains(t)) return 0.0;
      v *= sys.series(j[i])(t);
    }
    return v;
  };
  double s = 0.0;
  if (selection) {
    for (const auto& idx : *selection)
      if (tensor.contains(idx)) s += term(idx.j, idx.k, tensor.at(idx));
    return s;
  }
  tensor.for_each([&](const MultiIndex& j, const MultiIndex& k, double v) { s += term(j, k, v); });
  return s;
}

class Expansion {
 public:
  /// Compact representation valid for points inside `box`.
  Expansion(const CoefficientTensor& tensor, const BasisSystem& sys, Domain box,
            const IndexSet* selection = nullptr)
      : sys_(&sys), box_(std::move(box)), d_(tensor.dim()) {
    box_.validate();
    require(box_.dim() == d_, "expansion: box dimension mismatch");
    const CoefficientTensor* src = &tensor;
    CoefficientTensor picked;
    if (selection) {
      picked = tensor.restricted(*selection);
      src = &picked;
    }
    for (const auto& [j, entries] : src->levels()) blocks_.push_back(make_block(j, entries));
  }

  [[nodiscard]] const Domain& box() const noexcept { return box_; }
  [[nodiscard]] std::size_t level_count() const noexcept { return blocks_.size(); }

  double operator()(std::span<const double> x) const {
    require(x.size() == d_, "expansion: point dimension mismatch");
    require(box_.contains(x), "expansion: point outside the precomputed box");
    double total = 0.0;
    std::vector<long> first(d_);
    std::vector<std::vector<double>> g(d_);
    for (const auto& b : blocks_) {
      for (std::size_t i = 0; i < d_; ++i) {
        const auto& ser = sys_->series(b.j[i]);
        const double t = sys_->generator_argument(b.j[i], x[i]);
        first[i] = static_cast<long>(std::floor(t)) - ser.span() + 1;
        g[i].resize(static_cast<std::size_t>(ser.span()));
        for (int s = 0; s < ser.span(); ++s) g[i][static_cast<std::size_t>(s)] = ser.generator(t, first[i] + s);
      }
      total += b.contract_point(first, g);
    }
    return total;
  }

  /// Values on a tensor grid lying inside the box, row-major.
  [[nodiscard]] std::vector<double> on_grid(const TensorGrid& grid, unsigned threads = 1) const {
    require(grid.dim() == d_, "expansion: grid dimension mismatch");
    for (std::size_t i = 0; i < d_; ++i)
      for (double x : grid.axes[i])
        require(x >= box_.lo[i] && x <= box_.hi[i], "expansion: grid leaves the box");
    const std::size_t total = grid.size();
    std::vector<double> out(total, 0.0);
    if (blocks_.empty()) return out;

    // Group levels by j_0 so the (expensive) first-axis product runs once per group.
    std::map<int, std::vector<const Block*>> groups;
    for (const auto& b : blocks_) groups[b.j[0]].push_back(&b);

    std::size_t rest = 1;
    for (std::size_t i = 1; i < d_; ++i) rest *= grid.axes[i].size();

    for (const auto& [j0, members] : groups) {
      const long l0_lo = members.front()->lo[0];
      const std::size_t l0_n = members.front()->extent[0];
      std::vector<double> acc(l0_n * rest, 0.0);
      for (const Block* b : members) {
        // Contract axes d-1 .. 1 onto the grid.
        std::vector<double> cur = b->mu;
        std::vector<std::size_t> shape = b->extent;
        for (std::size_t ax = d_; ax-- > 1;) {
          auto mat = axis_matrix(b->j[ax], grid.axes[ax], b->lo[ax], shape[ax]);
          cur = mode_product(cur, shape, ax, mat, grid.axes[ax].size());
          shape[ax] = grid.axes[ax].size();
        }
        for (std::size_t i = 0; i < cur.size(); ++i) acc[i] += cur[i];
      }
      const auto mat = axis_matrix(j0, grid.axes[0], l0_lo, l0_n);
      const std::size_t n0 = grid.axes[0].size();
      parallel_for(n0, threads, [&](std::size_t p) {
        const auto& row = mat[p];
        double* dst = out.data() + p * rest;
        for (std::size_t s = 0; s < row.size(); ++s) {
          const auto [li, w] = row[s];
          const double* src = acc.data() + li * rest;
          for (std::size_t r = 0; r < rest; ++r) dst[r] += w * src[r];
        }
      });
    }
    return out;
  }

 private:
  struct Block {
    MultiIndex j;
    std::vector<long> lo;              // first generator index per axis
    std::vector<std::size_t> extent;   // generator count per axis
    std::vector<double> mu;            // row-major over the extents

    double contract_point(const std::vector<long>& first,
                          const std::vector<std::vector<double>>& g) const {
      const std::size_t d = j.size();
      std::vector<std::size_t> pos(d, 0);
      double total = 0.0;
      while (true) {
        std::size_t flat = 0;
        double w = 1.0;
        bool inside = true;
        for (std::size_t i = 0; i < d; ++i) {
          const long l = first[i] + static_cast<long>(pos[i]) - lo[i];
          if (l < 0 || l >= static_cast<long>(extent[i])) {
            inside = false;
            break;
          }
          flat = flat * extent[i] + static_cast<std::size_t>(l);
          w *= g[i][pos[i]];
        }
        if (inside && w != 0.0) total += w * mu[flat];
        std::size_t i = d;
        while (i > 0 && pos[i - 1] + 1 == g[i - 1].size()) pos[--i] = 0;
        if (i == 0) return total;
        ++pos[i - 1];
      }
    }
  };

  using SparseRow = std::vector<std::pair<std::size_t, double>>;

  // Row p lists (generator offset, value) pairs for grid coordinate p.
  [[nodiscard]] std::vector<SparseRow> axis_matrix(int j, const std::vector<double>& coords,
                                                   long l_lo, std::size_t l_n) const {
    const auto& ser = sys_->series(j);
    std::vector<SparseRow> rows(coords.size());
    for (std::size_t p = 0; p < coords.size(); ++p) {
      const double t = sys_->generator_argument(j, coords[p]);
      const long first = static_cast<long>(std::floor(t)) - ser.span() + 1;
      for (int s = 0; s < ser.span(); ++s) {
        const long l = first + s;
        if (l < l_lo || l >= l_lo + static_cast<long>(l_n)) continue;
        const double v = ser.generator(t, l);
        if (v != 0.0) rows[p].emplace_back(static_cast<std::size_t>(l - l_lo), v);
      }
    }
    return rows;
  }

  // out[outer, p, inner] = sum_s rows[p][s].w * in[outer, rows[p][s].l, inner]
  static std::vector<double> mode_product(const std::vector<double>& in,
                                          const std::vector<std::size_t>& shape, std::size_t axis,
                                          const std::vector<SparseRow>& rows, std::size_t n_out) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
    for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
    const std::size_t n_in = shape[axis];
    std::vector<double> out(outer * n_out * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t p = 0; p < n_out; ++p) {
        double* dst = out.data() + (o * n_out + p) * inner;
        for (const auto& [l, w] : rows[p]) {
          const double* src = in.data() + (o * n_in + l) * inner;
          for (std::size_t r = 0; r < inner; ++r) dst[r] += w * src[r];
        }
      }
    return out;
  }

  Block make_block(const MultiIndex& j, const CoefficientTensor::Level& entries) const {
    Block b;
    b.j = j;
    // Dense lambda over the bounding box of k.
    std::vector<long> k_lo(d_, 0), k_hi(d_, 0);
    bool first = true;
    for (const auto& [k, v] : entries) {
      for (std::size_t i = 0; i < d_; ++i) {
        k_lo[i] = first ? k[i] : std::min<long>(k_lo[i], k[i]);
        k_hi[i] = first ? k[i] : std::max<long>(k_hi[i], k[i]);
      }
      first = false;
    }
    std::vector<std::size_t> shape(d_);
    for (std::size_t i = 0; i < d_; ++i) shape[i] = static_cast<std::size_t>(k_hi[i] - k_lo[i] + 1);
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    std::vector<double> cur(n, 0.0);
    for (const auto& [k, v] : entries) {
      std::size_t flat = 0;
      for (std::size_t i = 0; i < d_; ++i) flat = flat * shape[i] + static_cast<std::size_t>(k[i] - k_lo[i]);
      cur[flat] = v;
    }
    b.lo.resize(d_);
    b.extent.resize(d_);
    // Convolve axis by axis with the level's filter onto the generator range.
    for (std::size_t ax = 0; ax < d_; ++ax) {
      const auto [l_lo, l_hi] = sys_->generator_range(j[ax], box_.lo[ax], box_.hi[ax]);
      const std::size_t l_n = static_cast<std::size_t>(l_hi - l_lo + 1);
      const auto& h = sys_->series(j[ax]).coefficients();
      const long w = h.window();
      std::vector<SparseRow> rows(l_n);
      for (std::size_t p = 0; p < l_n; ++p) {
        const long l = l_lo + static_cast<long>(p);
        const long kmin = std::max(k_lo[ax], l - w), kmax = std::min(k_hi[ax], l + w);
        for (long k = kmin; k <= kmax; ++k)
          rows[p].emplace_back(static_cast<std::size_t>(k - k_lo[ax]), h[l - k]);
      }
      cur = mode_product(cur, shape, ax, rows, l_n);
      shape[ax] = l_n;
      b.lo[ax] = l_lo;
      b.extent[ax] = l_n;
    }
    b.mu = std::move(cur);
    return b;
  }

  const BasisSystem* sys_;
  Domain box_;
  std::size_t d_;
  std::vector<Block> blocks_;
};

/// J^m_N f(x) = sum_n f(n / 2^N) L^{2m}(2^N x - n), summing over nodes in the
/// function's domain that lie within reach of the c_n window.
inline double interpolate_cardinal(const SampledFunction& f, const BasisSystem& sys, int level,
                                   std::span<const double> x) {
  require(level >= 0, "interpolate_cardinal: N must be >= 0");
  require(x.size() == f.dim(), "interpolate_cardinal: point dimension mismatch");
  const std::size_t d = x.size();
  const auto& dom = f.domain();
  const long reach = sys.cardinal().window() + sys.m();
  std::vector<long> lo(d), hi(d);
  std::vector<std::vector<double>> weights(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double t = std::ldexp(x[i], level);
    lo[i] = std::max(static_cast<long>(std::ceil(std::ldexp(dom.lo[i], level))),
                     static_cast<long>(std::floor(t)) - reach);
    hi[i] = std::min(static_cast<long>(std::floor(std::ldexp(dom.hi[i], level))),
                     static_cast<long>(std::ceil(t)) + reach);
    if (lo[i] > hi[i]) return 0.0;
    for (long n = lo[i]; n <= hi[i]; ++n) weights[i].push_back(sys.eval(-1, n, t));
  }
  std::vector<long> n(lo);
  std::vector<double> node(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      w *= weights[i][static_cast<std::size_t>(n[i] - lo[i])];
      node[i] = std::ldexp(static_cast<double>(n[i]), -level);
    }
    if (w != 0.0) total += w * f(node);
    std::size_t i = d;
    while (i > 0 && n[i - 1] == hi[i - 1]) {
      --i;
      n[i] = lo[i];
    }
    if (i == 0) return total;
    ++n[i - 1];
  }
}

}  // namespace faber
