#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "faber/errors.hpp"
#include "faber/tensor.hpp"

namespace faber {

enum class Extension { zero, callback };

/// Black-box point evaluator; the only access to the target function.
class SampledFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  SampledFunction(Evaluator f, Domain domain, Extension ext = Extension::zero)
      : f_(std::move(f)), domain_(std::move(domain)), ext_(ext) {
    require(static_cast<bool>(f_), "sampled function needs an evaluator");
    domain_.validate();
  }

  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t dim() const noexcept { return domain_.dim(); }
  [[nodiscard]] Extension extension() const noexcept { return ext_; }

  double operator()(std::span<const double> x) const {
    if (ext_ == Extension::zero && !domain_.contains(x)) return 0.0;
    try {
      return f_(x);
    } catch (const EvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      std::string at = "(";
      for (std::size_t i = 0; i < x.size(); ++i) at += (i ? "," : "") + std::to_string(x[i]);
      throw EvaluationError("target function failed at " + at + "): " + e.what());
    }
  }

 private:
  Evaluator f_;
  Domain domain_;
  Extension ext_;
};

/// Dyadic sample location: coordinate i is numerators[i] / 2^denominator_log2.
struct DyadicKey {
  std::vector<std::int64_t> numerators;
  friend bool operator==(const DyadicKey&, const DyadicKey&) = default;
};

struct DyadicKeyHash {
  std::size_t operator()(const DyadicKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k.numerators) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Thread-safe get-or-compute cache of function samples keyed by exact
/// dyadic coordinates at a common denominator 2^D. size() is the number of
/// distinct evaluator calls.
class SampleMemo {
 public:
  SampleMemo(const SampledFunction& f, int denominator_log2)
      : f_(f), log2_den_(denominator_log2) {}

  [[nodiscard]] int denominator_log2() const noexcept { return log2_den_; }

  double get(const DyadicKey& key) {
    auto& shard = shards_[DyadicKeyHash{}(key) % kShards];
    std::lock_guard lock(shard.mutex);
    if (auto it = shard.values.find(key); it != shard.values.end()) return it->second;
    std::vector<double> x(key.numerators.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::ldexp(static_cast<double>(key.numerators[i]), -log2_den_);
    const double v = f_(x);
    shard.values.emplace(key, v);
    return v;
  }

  [[nodiscard]] std::size_t size() const {
    std::size_t n = 0;
    for (auto& s : shards_) {
      std::lock_guard lock(s.mutex);
      n += s.values.size();
    }
    return n;
  }

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::mutex mutex;
    std::unordered_map<DyadicKey, double, DyadicKeyHash> values;
  };
  const SampledFunction& f_;
  int log2_den_;
  std::array<Shard, kShards> shards_;
};

}  // namespace faber
