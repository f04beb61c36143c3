#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "faber/errors.hpp"

namespace faber {

/// Integer vector used for both level (j) and translation (k) indices.
using MultiIndex = std::vector<int>;

/// Sum of entries; levels j_i = -1 contribute -1.
inline int l1(const MultiIndex& j) { return std::accumulate(j.begin(), j.end(), 0); }

inline int linf(const MultiIndex& j) {
  int m = j.empty() ? 0 : j.front();
  for (int v : j) m = v > m ? v : m;
  return m;
}

/// e(j): the directions with j_i >= 0.
inline std::vector<std::size_t> active_directions(const MultiIndex& j) {
  std::vector<std::size_t> e;
  for (std::size_t i = 0; i < j.size(); ++i)
    if (j[i] >= 0) e.push_back(i);
  return e;
}

inline std::string to_string(const MultiIndex& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

/// Address (j, k) of a tensorized basis function, j in {-1, 0, 1, ...}^d.
struct DyadicIndex {
  MultiIndex j;
  MultiIndex k;

  DyadicIndex() = default;
  DyadicIndex(MultiIndex level, MultiIndex shift) : j(std::move(level)), k(std::move(shift)) {
    require(j.size() == k.size(), "dyadic index: j and k must have the same length");
    for (int v : j) require(v >= -1, "dyadic index: levels must be >= -1");
  }

  [[nodiscard]] std::size_t dim() const noexcept { return j.size(); }

  /// Tie-break order used everywhere a deterministic ranking is needed:
  /// (|j|_1, j, k) lexicographically.
  friend std::strong_ordering operator<=>(const DyadicIndex& a, const DyadicIndex& b) {
    if (auto c = l1(a.j) <=> l1(b.j); c != 0) return c;
    if (auto c = a.j <=> b.j; c != 0) return c;
    return a.k <=> b.k;
  }
  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

inline std::string to_string(const DyadicIndex& idx) {
  return "j=" + to_string(idx.j) + " k=" + to_string(idx.k);
}

}  // namespace faber
