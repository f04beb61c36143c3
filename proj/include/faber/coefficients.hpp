#pragma once

// Exponentially decaying coefficient sequences: the dual-wavelet expansion
// coefficients a_n and the cardinal interpolation coefficients c_n. Both
// come from truncated bi-infinite Toeplitz systems on n in [-W, W].

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "faber/errors.hpp"
#include "faber/ppoly.hpp"

namespace faber {

enum class SequenceKind { dual, cardinal };

inline const char* to_string(SequenceKind k) {
  return k == SequenceKind::dual ? "dual" : "cardinal";
}

class CoefficientSequence {
 public:
  CoefficientSequence() = default;
  CoefficientSequence(SequenceKind kind, int order, std::vector<double> values,
                      double residual, double rcond)
      : kind_(kind), order_(order), values_(std::move(values)), residual_(residual),
        rcond_(rcond) {
    require(values_.size() % 2 == 1, "coefficient sequence must have odd length");
  }

  [[nodiscard]] SequenceKind kind() const noexcept { return kind_; }
  /// Wavelet half-order m for dual sequences, spline order for cardinal.
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int window() const noexcept { return static_cast<int>(values_.size() / 2); }
  /// Offset of n = 0 inside values().
  [[nodiscard]] int center_offset() const noexcept { return window(); }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }
  [[nodiscard]] double rcond() const noexcept { return rcond_; }

  double operator[](long n) const noexcept {
    const long w = window();
    if (n < -w || n > w) return 0.0;
    return values_[static_cast<std::size_t>(n + w)];
  }

  /// Largest |value| at |n| = window, a proxy for the truncated tail.
  [[nodiscard]] double tail_bound() const noexcept {
    return std::max(std::abs(values_.front()), std::abs(values_.back()));
  }

 private:
  SequenceKind kind_ = SequenceKind::dual;
  int order_ = 0;
  std::vector<double> values_;
  double residual_ = 0.0;
  double rcond_ = 0.0;
};

namespace detail {

// Solves sum_n x_n band[k - n] = delta_{k,0} for |k|, |n| <= W, then checks
// the equation on the widened range |k| <= W + halfwidth, which exposes the
// truncation error of the window.
inline std::pair<std::vector<double>, std::pair<double, double>> solve_toeplitz_delta(
    const std::vector<double>& band, int halfwidth, int window, double tol,
    const std::string& what) {
  require(window >= 1, what + ": window must be >= 1");
  const int n = 2 * window + 1;
  auto entry = [&](int d) {
    if (d < -halfwidth || d > halfwidth) return 0.0;
    return band[static_cast<std::size_t>(d + halfwidth)];
  };
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = entry(r - c);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(window) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rc = lu.rcond();
  if (!(rc > 1e-13))
    throw NumericalError(what + ": system is singular or ill-conditioned (rcond=" +
                         std::to_string(rc) + ")");
  Eigen::VectorXd x = lu.solve(rhs);
  std::vector<double> vals(x.data(), x.data() + n);

  double res = 0.0;
  for (int k = -window - halfwidth; k <= window + halfwidth; ++k) {
    double s = 0.0;
    for (int m = -window; m <= window; ++m)
      s += vals[static_cast<std::size_t>(m + window)] * entry(k - m);
    res = std::max(res, std::abs(s - (k == 0 ? 1.0 : 0.0)));
  }
  if (!(res < tol))
    throw NumericalError(what + ": residual " + std::to_string(res) + " exceeds tolerance at W=" +
                         std::to_string(window) + "; increase the window");
  return {std::move(vals), {res, rc}};
}

}  // namespace detail

/// Gram entries <psi_m, psi_m(. - k)> for |k| <= 2m - 2 (zero beyond).
inline std::vector<double> wavelet_gram(int m) {
  const auto psi = chui_wang(m);
  const int hw = 2 * m - 2;
  std::vector<double> g(static_cast<std::size_t>(2 * hw + 1));
  for (int k = 0; k <= hw; ++k) {
    const double v = inner_product(psi, psi.shifted(static_cast<double>(k)));
    g[static_cast<std::size_t>(hw + k)] = v;
    g[static_cast<std::size_t>(hw - k)] = v;
  }
  return g;
}

/// a_n^{(m)} with psi_m^* = sum_n a_n psi_m(. - n), from the truncated
/// biorthogonality system sum_n a_n <psi_m(. - n), psi_m(. - k)> = delta_{k,0}.
inline CoefficientSequence dual_coefficients(int m, int window = 40, double tol = 1e-12) {
  require(m >= 1, "dual_coefficients: m must be >= 1");
  auto [vals, info] =
      detail::solve_toeplitz_delta(wavelet_gram(m), 2 * m - 2, window, tol, "dual_coefficients");
  return {SequenceKind::dual, m, std::move(vals), info.first, info.second};
}

/// c_n for the fundamental spline L(x) = sum_n c_n N_o(x + o/2 - n) of order o,
/// from the interpolation system L(j) = delta_{j,0}.
inline CoefficientSequence cardinal_coefficients(int order, int window = 40, double tol = 1e-12) {
  require(order >= 2, "cardinal_coefficients: spline order must be >= 2");
  const auto n = bspline(order);
  const int hw = order / 2 + 1;
  std::vector<double> band(static_cast<std::size_t>(2 * hw + 1));
  for (int d = -hw; d <= hw; ++d)
    band[static_cast<std::size_t>(d + hw)] = n(static_cast<double>(d) + 0.5 * order);
  auto [vals, info] =
      detail::solve_toeplitz_delta(band, hw, window, tol, "cardinal_coefficients");
  return {SequenceKind::cardinal, order, std::move(vals), info.first, info.second};
}

}  // namespace faber
