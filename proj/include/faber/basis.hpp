#pragma once

// Univariate and tensorized Faber spline basis functions s_{2m;j,k}.
//
//   j >= 0 : s_{2m;j,k}(x) = (-1)^m sum_n a_n v_{2m}(2^j x - k - n)
//   j = -1 : s_{2m;-1,k}(x) = L^{2m}(x - k) = sum_n c_n N_{2m}(x - k + m - n)
//
// The (-1)^m comes from the m-fold integration by parts linking the sampled
// coefficient functional to the wavelet coefficients of f^{(m)}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "faber/coefficients.hpp"
#include "faber/dyadic.hpp"
#include "faber/errors.hpp"
#include "faber/ppoly.hpp"

namespace faber {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;

  [[nodiscard]] bool contains(double x) const noexcept { return !empty && x >= lo && x <= hi; }
  [[nodiscard]] bool intersects(double a, double b) const noexcept {
    return !empty && hi >= a && lo <= b;
  }
};

/// F(t) = sum_n h_n K(t - n) for a kernel K supported on [0, span] with
/// integer span.
class ShiftSeries {
 public:
  ShiftSeries() = default;
  ShiftSeries(PiecewisePolynomial kernel, CoefficientSequence coeffs, double scale)
      : kernel_(std::move(kernel)), coeffs_(std::move(coeffs)), scale_(scale) {
    span_ = static_cast<int>(std::lround(kernel_.upper() - kernel_.lower()));
    require(kernel_.lower() == 0.0 && static_cast<double>(span_) == kernel_.upper(),
            "shift series kernel must live on [0, integer]");
    // Certified bound of |K| on each unit cell [i, i+1].
    cell_max_.assign(static_cast<std::size_t>(span_), 0.0);
    const auto b = kernel_.breakpoints();
    for (std::size_t s = 0; s < kernel_.segment_count(); ++s) {
      const double w = b[s + 1] - b[s];
      double bound = 0.0, wp = 1.0;
      for (double c : kernel_.segments()[s]) {
        bound += std::abs(c) * wp;
        wp *= w;
      }
      const auto cell = static_cast<std::size_t>(std::floor(b[s]));
      cell_max_[cell] = std::max(cell_max_[cell], bound);
    }
  }

  double operator()(double t) const noexcept {
    const double ft = std::floor(t);
    if (!std::isfinite(ft)) return 0.0;
    const long top = static_cast<long>(ft);
    double s = 0.0;
    for (long n = top - span_ + 1; n <= top; ++n) {
      const double h = coeffs_[n];
      if (h != 0.0) s += h * kernel_(t - static_cast<double>(n));
    }
    return scale_ * s;
  }

  [[nodiscard]] const PiecewisePolynomial& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const CoefficientSequence& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] int span() const noexcept { return span_; }

  /// Kernel value at t - l including the overall scale; the generator of the
  /// compact representation sum_l mu_l K(t - l).
  [[nodiscard]] double generator(double t, long l) const noexcept {
    return scale_ * kernel_(t - static_cast<double>(l));
  }

  /// Interval in t outside which |F| < tol is certified.
  [[nodiscard]] Interval support(double tol) const {
    const long w = coeffs_.window();
    long first = std::numeric_limits<long>::max(), last = std::numeric_limits<long>::min();
    for (long cell = -w; cell <= w + span_ - 1; ++cell) {
      double bound = 0.0;
      for (int i = 0; i < span_; ++i)
        bound += std::abs(coeffs_[cell - i]) * cell_max_[static_cast<std::size_t>(i)];
      if (std::abs(scale_) * bound >= tol) {
        first = std::min(first, cell);
        last = std::max(last, cell);
      }
    }
    if (first > last) return {};
    return {static_cast<double>(first), static_cast<double>(last + 1), false};
  }

 private:
  PiecewisePolynomial kernel_;
  CoefficientSequence coeffs_;
  double scale_ = 1.0;
  int span_ = 0;
  std::vector<double> cell_max_;
};

class BasisSystem {
 public:
  /// Builds the order-2m system with coefficient windows of half-width W.
  static std::shared_ptr<const BasisSystem> build(int m, int window = 40, double tol = 1e-12) {
    require(m >= 1 && m <= 6, "basis half-order m must be in [1, 6]");
    return std::shared_ptr<const BasisSystem>(new BasisSystem(m, window, tol));
  }

  [[nodiscard]] int m() const noexcept { return m_; }
  [[nodiscard]] int order() const noexcept { return 2 * m_; }
  [[nodiscard]] const CoefficientSequence& dual() const noexcept { return detail_.coefficients(); }
  [[nodiscard]] const CoefficientSequence& cardinal() const noexcept {
    return coarse_.coefficients();
  }
  /// v_{2m}.
  [[nodiscard]] const PiecewisePolynomial& kernel() const noexcept { return detail_.kernel(); }
  /// N_{2m}.
  [[nodiscard]] const PiecewisePolynomial& bspline() const noexcept { return coarse_.kernel(); }
  /// L^{2m} as an explicit piecewise polynomial over the coefficient window.
  [[nodiscard]] const PiecewisePolynomial& boundary_kernel() const noexcept { return cardinal_pp_; }
  /// Series used for j >= 0 (argument 2^j x - k) and j = -1 (argument x - k + m).
  [[nodiscard]] const ShiftSeries& detail_series() const noexcept { return detail_; }
  [[nodiscard]] const ShiftSeries& coarse_series() const noexcept { return coarse_; }
  [[nodiscard]] const ShiftSeries& series(int j) const noexcept {
    return j >= 0 ? detail_ : coarse_;
  }

  /// Argument of the level-j series for basis index k at x.
  [[nodiscard]] double local_argument(int j, long k, double x) const noexcept {
    if (j >= 0) return std::ldexp(x, j) - static_cast<double>(k);
    return x - static_cast<double>(k) + static_cast<double>(m_);
  }

  /// Argument of the compact generator for level j at x (k = 0).
  [[nodiscard]] double generator_argument(int j, double x) const noexcept {
    return local_argument(j, 0, x);
  }

  /// Range of generator indices l with a nonzero generator somewhere on [a, b].
  [[nodiscard]] std::pair<long, long> generator_range(int j, double a, double b) const {
    const double ta = generator_argument(j, a), tb = generator_argument(j, b);
    const int span = series(j).span();
    return {static_cast<long>(std::floor(ta)) - span + 1, static_cast<long>(std::floor(tb))};
  }

  /// s_{2m;j,k}(x).
  [[nodiscard]] double eval(int j, long k, double x) const noexcept {
    return series(j)(local_argument(j, k, x));
  }

  /// Interval outside which |s_{2m;j,k}| < tol.
  [[nodiscard]] Interval essential_support(int j, long k, double tol) const {
    require(tol > 0.0, "essential_support: tol must be positive");
    auto t = series(j).support(tol);
    if (t.empty) return t;
    if (j >= 0) {
      return {std::ldexp(static_cast<double>(k) + t.lo, -j),
              std::ldexp(static_cast<double>(k) + t.hi, -j), false};
    }
    const double off = static_cast<double>(k) - static_cast<double>(m_);
    return {off + t.lo, off + t.hi, false};
  }

 private:
  BasisSystem(int m, int window, double tol) : m_(m) {
    const double sign = (m % 2) ? -1.0 : 1.0;
    detail_ = ShiftSeries(lift_kernel(m), dual_coefficients(m, window, tol), sign);
    coarse_ = ShiftSeries(faber::bspline(2 * m), cardinal_coefficients(2 * m, window, tol), 1.0);
    const auto& c = coarse_.coefficients();
    for (long n = -c.window(); n <= c.window(); ++n)
      cardinal_pp_ = cardinal_pp_ +
                     c[n] * coarse_.kernel().shifted(static_cast<double>(n - m));
  }

  int m_;
  ShiftSeries detail_;
  ShiftSeries coarse_;
  PiecewisePolynomial cardinal_pp_;
};

using BasisPtr = std::shared_ptr<const BasisSystem>;

/// s_{2m;j,k}(x), the univariate basis function.
inline double eval_univariate(const BasisSystem& sys, int j, long k, double x) {
  require(j >= -1, "eval_univariate: level must be >= -1");
  return sys.eval(j, k, x);
}

/// Tensor product basis function at x; factors are multiplied in direction order.
inline double eval_tensor(const BasisSystem& sys, const DyadicIndex& idx,
                          std::span<const double> x) {
  require(x.size() == idx.dim(), "eval_tensor: point dimension does not match the index");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v *= sys.eval(idx.j[i], idx.k[i], x[i]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

inline Interval essential_support(const BasisSystem& sys, int j, long k, double tol) {
  return sys.essential_support(j, k, tol);
}

}  // namespace faber
