#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "faber/dyadic.hpp"
#include "faber/errors.hpp"

namespace faber {

/// Axis-aligned box [lo_i, hi_i]^d.
struct Domain {
  std::vector<double> lo;
  std::vector<double> hi;

  static Domain cube(std::size_t d, double a = 0.0, double b = 1.0) {
    return {std::vector<double>(d, a), std::vector<double>(d, b)};
  }

  [[nodiscard]] std::size_t dim() const noexcept { return lo.size(); }

  void validate() const {
    require(!lo.empty() && lo.size() == hi.size(), "domain: lo/hi must be nonempty and match");
    for (std::size_t i = 0; i < lo.size(); ++i)
      require(lo[i] <= hi[i], "domain: lo must not exceed hi");
  }

  [[nodiscard]] bool contains(std::span<const double> x) const noexcept {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Level cap: |j|_inf <= n ("inf:n") or |j|_1 <= n ("hyp:n").
struct CapSpec {
  enum class Kind { max_level, hyperbolic };
  Kind kind = Kind::max_level;
  int n = 0;

  static CapSpec max_level(int n) { return {Kind::max_level, n}; }
  static CapSpec hyperbolic(int n) { return {Kind::hyperbolic, n}; }

  static CapSpec parse(const std::string& s) {
    const auto colon = s.find(':');
    require(colon != std::string::npos, "cap must look like inf:N or hyp:J, got '" + s + "'");
    const auto kind = s.substr(0, colon);
    const auto num = s.substr(colon + 1);
    int v = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    require(ec == std::errc{} && p == num.data() + num.size(), "cap level is not an integer: " + s);
    if (kind == "inf") return max_level(v);
    if (kind == "hyp") return hyperbolic(v);
    throw ConfigError("cap kind must be 'inf' or 'hyp', got '" + kind + "'");
  }

  [[nodiscard]] std::string to_string() const {
    return std::string(kind == Kind::max_level ? "inf:" : "hyp:") + std::to_string(n);
  }

  [[nodiscard]] bool admits(const MultiIndex& j) const {
    return kind == Kind::max_level ? linf(j) <= n : l1(j) <= n;
  }

  /// Largest single-direction level reachable in dimension d.
  [[nodiscard]] int max_direction_level(std::size_t d) const {
    return kind == Kind::max_level ? n : n + static_cast<int>(d) - 1;
  }

  /// All admissible level vectors in lexicographic order.
  [[nodiscard]] std::vector<MultiIndex> levels(std::size_t d) const {
    std::vector<MultiIndex> out;
    const int top = max_direction_level(d);
    if (top < -1) return out;
    MultiIndex j(d, -1);
    while (true) {
      if (admits(j)) out.push_back(j);
      std::size_t i = d;
      while (i > 0 && j[i - 1] == top) j[--i] = -1;
      if (i == 0) return out;
      ++j[i - 1];
    }
  }

  friend bool operator==(const CapSpec&, const CapSpec&) = default;
};

/// Sorted, duplicate-free set of indices (ordered by the DyadicIndex tie-break).
using IndexSet = std::vector<DyadicIndex>;

inline void normalize(IndexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

/// Sparse level-indexed store of coefficient values.
class CoefficientTensor {
 public:
  using Level = std::map<MultiIndex, double>;

  CoefficientTensor() = default;
  CoefficientTensor(std::size_t d, int m, double drop_tol = 1e-14)
      : d_(d), m_(m), drop_tol_(drop_tol) {}

  [[nodiscard]] std::size_t dim() const noexcept { return d_; }
  [[nodiscard]] int m() const noexcept { return m_; }
  [[nodiscard]] double drop_tol() const noexcept { return drop_tol_; }

  CapSpec cap;
  Domain domain;
  std::size_t samples_used = 0;

  /// Stores value unless |value| < drop_tol; returns whether it was stored.
  bool insert(const DyadicIndex& idx, double value) {
    require(idx.dim() == d_, "tensor insert: index dimension mismatch");
    for (int v : idx.j) require(v >= -1, "tensor insert: level below -1");
    if (!(std::abs(value) >= drop_tol_)) {
      erase(idx);
      return false;
    }
    levels_[idx.j][idx.k] = value;
    return true;
  }

  void erase(const DyadicIndex& idx) {
    auto it = levels_.find(idx.j);
    if (it == levels_.end()) return;
    it->second.erase(idx.k);
    if (it->second.empty()) levels_.erase(it);
  }

  /// Adds a whole level at once (entries below drop_tol are skipped).
  void insert_level(const MultiIndex& j, Level entries) {
    std::erase_if(entries, [&](const auto& kv) { return !(std::abs(kv.second) >= drop_tol_); });
    if (entries.empty()) return;
    levels_[j] = std::move(entries);
  }

  [[nodiscard]] double at(const DyadicIndex& idx) const {
    auto it = levels_.find(idx.j);
    if (it == levels_.end()) return 0.0;
    auto e = it->second.find(idx.k);
    return e == it->second.end() ? 0.0 : e->second;
  }

  [[nodiscard]] bool contains(const DyadicIndex& idx) const {
    auto it = levels_.find(idx.j);
    return it != levels_.end() && it->second.contains(idx.k);
  }

  [[nodiscard]] const std::map<MultiIndex, Level>& levels() const noexcept { return levels_; }

  [[nodiscard]] std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& [j, lv] : levels_) n += lv.size();
    return n;
  }
  [[nodiscard]] bool empty() const noexcept { return levels_.empty(); }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [j, lv] : levels_)
      for (const auto& [k, v] : lv) fn(j, k, v);
  }

  [[nodiscard]] IndexSet indices() const {
    IndexSet s;
    s.reserve(size());
    for_each([&](const MultiIndex& j, const MultiIndex& k, double) { s.emplace_back(j, k); });
    normalize(s);
    return s;
  }

  /// Copy holding only the listed indices (missing ones are ignored).
  [[nodiscard]] CoefficientTensor restricted(const IndexSet& sel) const {
    CoefficientTensor out = like();
    for (const auto& idx : sel)
      if (contains(idx)) out.levels_[idx.j][idx.k] = at(idx);
    return out;
  }

  /// Copy without the listed indices.
  [[nodiscard]] CoefficientTensor without(const IndexSet& sel) const {
    CoefficientTensor out = *this;
    for (const auto& idx : sel) out.erase(idx);
    return out;
  }

  /// Copy with every value multiplied by c.
  [[nodiscard]] CoefficientTensor scaled(double c) const {
    CoefficientTensor out = *this;
    for (auto& [j, lv] : out.levels_)
      for (auto& [k, v] : lv) v *= c;
    return out;
  }

  /// Empty tensor with the same metadata.
  [[nodiscard]] CoefficientTensor like() const {
    CoefficientTensor out(d_, m_, drop_tol_);
    out.cap = cap;
    out.domain = domain;
    out.samples_used = samples_used;
    return out;
  }

  /// Largest single-direction level present, or -1 for an empty tensor.
  [[nodiscard]] int finest_level() const {
    int top = -1;
    for (const auto& [j, lv] : levels_) top = std::max(top, linf(j));
    return top;
  }

  /// Finest level per direction.
  [[nodiscard]] std::vector<int> finest_levels() const {
    std::vector<int> top(d_, -1);
    for (const auto& [j, lv] : levels_)
      for (std::size_t i = 0; i < d_; ++i) top[i] = std::max(top[i], j[i]);
    return top;
  }

 private:
  std::size_t d_ = 1;
  int m_ = 2;
  double drop_tol_ = 1e-14;
  std::map<MultiIndex, Level> levels_;
};

}  // namespace faber
