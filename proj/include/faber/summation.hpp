#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace faber {

/// Pairwise (cascade) summation with a fixed tree shape: the result depends
/// only on the order of the input, never on how work was split across
/// threads.
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 16;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// |x|^p with exact fast paths for p = 1 and p = 2, so that scaling by powers
/// of two commutes bitwise with the norms built on top of it.
inline double abs_pow(double x, double p) {
  x = std::abs(x);
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

/// s^(1/p) with the matching fast paths.
inline double root(double s, double p) {
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

}  // namespace faber
