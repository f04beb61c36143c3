#pragma once

// Exact piecewise-polynomial algebra and the univariate spline building
// blocks (B-splines, Chui-Wang wavelets, lifted kernels).
//
// Segments are stored in local monomial form: on [b_i, b_{i+1}) the value is
// sum_r c_{i,r} (x - b_i)^r. Evaluation is right-continuous (half-open
// segments), and the function is zero outside [b_0, b_n).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "faber/errors.hpp"

namespace faber {

namespace poly {

/// Coefficients of p(y + delta) given those of p(y).
inline std::vector<double> taylor_shift(std::vector<double> c, double delta) {
  if (delta == 0.0) return c;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += delta * c[k];
  return c;
}

inline double horner(std::span<const double> c, double y) {
  double v = 0.0;
  for (std::size_t r = c.size(); r-- > 0;) v = v * y + c[r];
  return v;
}

inline std::vector<double> multiply(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

}  // namespace poly

class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;

  PiecewisePolynomial(std::vector<double> breakpoints,
                      std::vector<std::vector<double>> segments)
      : breaks_(std::move(breakpoints)), segs_(std::move(segments)) {
    if (breaks_.empty() && segs_.empty()) return;
    require(breaks_.size() >= 2, "piecewise polynomial needs >= 2 breakpoints");
    require(segs_.size() + 1 == breaks_.size(),
            "piecewise polynomial: segment count must be breakpoints - 1");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
      require(breaks_[i] < breaks_[i + 1],
              "piecewise polynomial: breakpoints must be strictly increasing");
    normalize_degree();
  }

  /// A single polynomial on [lo, hi), given in powers of (x - lo).
  static PiecewisePolynomial on_interval(double lo, double hi,
                                         std::vector<double> coeffs) {
    return PiecewisePolynomial({lo, hi}, {std::move(coeffs)});
  }

  [[nodiscard]] bool empty() const noexcept { return segs_.empty(); }
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breaks_; }
  [[nodiscard]] const std::vector<std::vector<double>>& segments() const noexcept {
    return segs_;
  }
  [[nodiscard]] std::size_t segment_count() const noexcept { return segs_.size(); }
  [[nodiscard]] int degree() const noexcept {
    return segs_.empty() ? 0 : static_cast<int>(segs_.front().size()) - 1;
  }
  [[nodiscard]] double lower() const noexcept { return breaks_.empty() ? 0.0 : breaks_.front(); }
  [[nodiscard]] double upper() const noexcept { return breaks_.empty() ? 0.0 : breaks_.back(); }

  /// Index of the segment containing x, or -1 outside [lower, upper).
  [[nodiscard]] std::ptrdiff_t locate(double x) const noexcept {
    if (segs_.empty() || !(x >= breaks_.front()) || !(x < breaks_.back())) return -1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return (it - breaks_.begin()) - 1;
  }

  double operator()(double x) const noexcept {
    const auto i = locate(x);
    if (i < 0) return 0.0;
    const auto u = static_cast<std::size_t>(i);
    return poly::horner(segs_[u], x - breaks_[u]);
  }

  /// Value of the polynomial piece of segment i at x (x may lie outside the
  /// segment; used for one-sided limits at breakpoints).
  [[nodiscard]] double segment_value(std::size_t i, double x) const {
    return poly::horner(segs_[i], x - breaks_[i]);
  }

  [[nodiscard]] PiecewisePolynomial derivative() const {
    if (empty()) return {};
    std::vector<std::vector<double>> out;
    out.reserve(segs_.size());
    for (const auto& c : segs_) {
      std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
      for (std::size_t r = 1; r < c.size(); ++r) d[r - 1] = static_cast<double>(r) * c[r];
      out.push_back(std::move(d));
    }
    return {breaks_, std::move(out)};
  }

  [[nodiscard]] PiecewisePolynomial derivative(int order) const {
    PiecewisePolynomial p = *this;
    for (int i = 0; i < order; ++i) p = p.derivative();
    return p;
  }

  /// x -> integral from lower() to x. Continuous across breakpoints; the
  /// result is truncated to the same support, so callers integrating
  /// something with nonzero total mass must extend it themselves.
  [[nodiscard]] PiecewisePolynomial antiderivative() const {
    if (empty()) return {};
    std::vector<std::vector<double>> out;
    out.reserve(segs_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      const auto& c = segs_[i];
      std::vector<double> a(c.size() + 1, 0.0);
      a[0] = acc;
      for (std::size_t r = 0; r < c.size(); ++r) a[r + 1] = c[r] / static_cast<double>(r + 1);
      acc = poly::horner(a, breaks_[i + 1] - breaks_[i]);
      out.push_back(std::move(a));
    }
    return {breaks_, std::move(out)};
  }

  [[nodiscard]] double integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      const double w = breaks_[i + 1] - breaks_[i];
      double wp = w;
      for (std::size_t r = 0; r < segs_[i].size(); ++r) {
        s += segs_[i][r] * wp / static_cast<double>(r + 1);
        wp *= w;
      }
    }
    return s;
  }

  /// x -> p(x - s).
  [[nodiscard]] PiecewisePolynomial shifted(double s) const {
    auto b = breaks_;
    for (auto& x : b) x += s;
    return {std::move(b), segs_};
  }

  /// x -> p(a x - b) for a > 0.
  [[nodiscard]] PiecewisePolynomial dilated(double a, double b) const {
    require(a > 0.0, "dilation factor must be positive");
    if (empty()) return {};
    std::vector<double> nb(breaks_.size());
    for (std::size_t i = 0; i < breaks_.size(); ++i) nb[i] = (breaks_[i] + b) / a;
    auto ns = segs_;
    for (auto& c : ns) {
      double ap = 1.0;
      for (auto& v : c) {
        v *= ap;
        ap *= a;
      }
    }
    return {std::move(nb), std::move(ns)};
  }

  PiecewisePolynomial& operator*=(double s) {
    for (auto& c : segs_)
      for (auto& v : c) v *= s;
    return *this;
  }
  friend PiecewisePolynomial operator*(PiecewisePolynomial p, double s) { return p *= s; }
  friend PiecewisePolynomial operator*(double s, PiecewisePolynomial p) { return p *= s; }

  /// Polynomial piece active on [u, v) expressed about u; zero outside the
  /// support. [u, v) must not straddle a breakpoint.
  [[nodiscard]] std::vector<double> piece_about(double u, double v) const {
    const std::size_t width = static_cast<std::size_t>(degree()) + 1;
    if (empty() || v <= lower() || u >= upper()) return std::vector<double>(width, 0.0);
    const auto i = static_cast<std::size_t>(locate(u));
    return poly::taylor_shift(segs_[i], u - breaks_[i]);
  }

  friend PiecewisePolynomial operator+(const PiecewisePolynomial& p,
                                       const PiecewisePolynomial& q) {
    if (p.empty()) return q;
    if (q.empty()) return p;
    auto b = merged_breaks(p.breaks_, q.breaks_, p.lower() < q.lower() ? p.lower() : q.lower(),
                           std::max(p.upper(), q.upper()));
    std::vector<std::vector<double>> segs;
    segs.reserve(b.size() - 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      auto a = p.piece_about(b[i], b[i + 1]);
      auto c = q.piece_about(b[i], b[i + 1]);
      if (a.size() < c.size()) std::swap(a, c);
      for (std::size_t r = 0; r < c.size(); ++r) a[r] += c[r];
      segs.push_back(std::move(a));
    }
    return {std::move(b), std::move(segs)};
  }
  friend PiecewisePolynomial operator-(const PiecewisePolynomial& p,
                                       const PiecewisePolynomial& q) {
    return p + (-1.0) * q;
  }

  /// Pointwise product, supported on the intersection of the supports.
  friend PiecewisePolynomial product(const PiecewisePolynomial& p,
                                     const PiecewisePolynomial& q) {
    if (p.empty() || q.empty()) return {};
    const double lo = std::max(p.lower(), q.lower());
    const double hi = std::min(p.upper(), q.upper());
    if (!(lo < hi)) return {};
    auto b = merged_breaks(p.breaks_, q.breaks_, lo, hi);
    std::vector<std::vector<double>> segs;
    segs.reserve(b.size() - 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      segs.push_back(poly::multiply(p.piece_about(b[i], b[i + 1]), q.piece_about(b[i], b[i + 1])));
    return {std::move(b), std::move(segs)};
  }

  /// Exact integral of p * q.
  friend double inner_product(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
    return product(p, q).integral();
  }

 private:
  static std::vector<double> merged_breaks(std::span<const double> a, std::span<const double> b,
                                           double lo, double hi) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [&](double x) { return x < lo || x > hi; });
    return out;
  }

  void normalize_degree() {
    std::size_t width = 1;
    for (const auto& c : segs_) width = std::max(width, c.size());
    for (auto& c : segs_) c.resize(width, 0.0);
  }

  std::vector<double> breaks_;
  std::vector<std::vector<double>> segs_;
};

/// The monomial x^alpha restricted to [lo, hi).
inline PiecewisePolynomial monomial(int alpha, double lo, double hi) {
  std::vector<double> c(static_cast<std::size_t>(alpha) + 1, 0.0);
  c[static_cast<std::size_t>(alpha)] = 1.0;
  return PiecewisePolynomial::on_interval(lo, hi, poly::taylor_shift(std::move(c), lo));
}

/// x -> integral_{x-1}^{x} p(s) ds, i.e. the convolution p * chi_[0,1).
inline PiecewisePolynomial convolve_unit_box(const PiecewisePolynomial& p) {
  if (p.empty()) return {};
  const auto anti = p.antiderivative();
  const double total = p.integral();
  std::vector<double> b;
  for (double x : p.breakpoints()) {
    b.push_back(x);
    b.push_back(x + 1.0);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());

  const std::size_t width = static_cast<std::size_t>(anti.degree()) + 1;
  // Running integral P on [u, v): the antiderivative piece, or the constant
  // total beyond the support.
  auto running = [&](double u, double v) {
    if (u >= anti.upper()) {
      std::vector<double> c(width, 0.0);
      c[0] = total;
      return c;
    }
    return anti.piece_about(u, v);
  };
  std::vector<std::vector<double>> segs;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    auto c = running(b[i], b[i + 1]);
    const auto lagged = running(b[i] - 1.0, b[i + 1] - 1.0);
    for (std::size_t r = 0; r < width; ++r) c[r] -= lagged[r];
    segs.push_back(std::move(c));
  }
  return {std::move(b), std::move(segs)};
}

/// N_m, the order-m cardinal B-spline on knots 0..m, built by repeated
/// convolution with N_1 = chi_[0,1).
inline PiecewisePolynomial bspline(int order) {
  require(order >= 1, "B-spline order must be >= 1, got " + std::to_string(order));
  auto n = PiecewisePolynomial::on_interval(0.0, 1.0, {1.0});
  for (int i = 1; i < order; ++i) n = convolve_unit_box(n);
  return n;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// r-th derivative of N_m at x through N_m' = N_{m-1} - N_{m-1}(. - 1).
inline double bspline_derivative(int order, int r, double x) {
  require(order >= 1, "B-spline order must be >= 1");
  require(r >= 0 && r <= order - 1,
          "derivative order must satisfy 0 <= r <= m - 1 (got r=" + std::to_string(r) +
              ", m=" + std::to_string(order) + ")");
  const auto base = bspline(order - r);
  double s = 0.0;
  for (int i = 0; i <= r; ++i)
    s += ((i % 2) ? -1.0 : 1.0) * binomial(r, i) * base(x - static_cast<double>(i));
  return s;
}

/// psi_m(x) = 2^{1-m} sum_{l=0}^{2m-2} (-1)^l N_{2m}(l+1) N_{2m}^{(m)}(2x - l),
/// supported on [0, 2m-1] with m vanishing moments.
inline PiecewisePolynomial chui_wang(int m) {
  require(m >= 1, "wavelet order must be >= 1");
  const auto n2m = bspline(2 * m);
  const auto dm = n2m.derivative(m);
  PiecewisePolynomial psi;
  for (int l = 0; l <= 2 * m - 2; ++l) {
    const double w = ((l % 2) ? -1.0 : 1.0) * n2m(static_cast<double>(l + 1));
    psi = psi + w * dm.dilated(2.0, static_cast<double>(l));
  }
  return std::ldexp(1.0, 1 - m) * psi;
}

/// v_{2m}: the m-fold antiderivative of psi_m, vanishing left of 0.
/// Supported on [0, 2m-1] and C^{2m-2} (the vanishing moments of psi_m make
/// every intermediate antiderivative vanish again at 2m-1).
inline PiecewisePolynomial lift_kernel(int m) {
  require(m >= 1, "kernel order must be >= 1");
  auto v = chui_wang(m);
  for (int i = 0; i < m; ++i) v = v.antiderivative();
  return v;
}

}  // namespace faber
