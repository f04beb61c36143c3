#pragma once

// Test functions on [0,1]^d, zero outside.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "faber/errors.hpp"
#include "faber/ppoly.hpp"
#include "faber/sampling.hpp"
#include "faber/tensor.hpp"

namespace faber {

struct TestFunction {
  std::string name;
  SampledFunction f;
  /// Which mixed-smoothness classes the function belongs to, and why.
  std::string smoothness;
};

namespace testfn_detail {

inline double bump1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = 2.0 * t - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

struct Call {
  std::string name;
  std::string arg;
};

inline Call split_call(const std::string& s) {
  const auto open = s.find('(');
  if (open == std::string::npos) return {s, ""};
  require(s.back() == ')', "test function '" + s + "': missing ')'");
  return {s.substr(0, open), s.substr(open + 1, s.size() - open - 2)};
}

inline double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    require(used == s.size(), "");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
}

}  // namespace testfn_detail

constexpr const char* kTestFunctionNames =
    "tensor_bspline(order[,level]), smooth_bump, tensor_poly_bump(degree), kink(alpha)";

/// prod_i N_o(2^N x_i); N defaults to the smallest level that fits the
/// support into [0,1].
inline TestFunction tensor_bspline(std::size_t d, int order, int level = -1) {
  require(order >= 1 && order <= 12, "tensor_bspline: order must be in [1, 12]");
  if (level < 0) {
    level = 0;
    while ((1 << level) < order) ++level;
  }
  auto n = std::make_shared<PiecewisePolynomial>(bspline(order));
  const double s = std::ldexp(1.0, level);
  SampledFunction f(
      [n, s](std::span<const double> x) {
        double v = 1.0;
        for (double t : x) v *= (*n)(s * t);
        return v;
      },
      Domain::cube(d));
  return {"tensor_bspline(" + std::to_string(order) + "," + std::to_string(level) + ")",
          std::move(f),
          "spline of order " + std::to_string(order) + " with knots 2^-" + std::to_string(level) +
              "Z; reproduced exactly for order 2m and level < cap"};
}

/// prod_i exp(1 - 1/(1 - (2 x_i - 1)^2)) on (0,1)^d.
inline TestFunction smooth_bump(std::size_t d) {
  SampledFunction f(
      [](std::span<const double> x) {
        double v = 1.0;
        for (double t : x) {
          v *= testfn_detail::bump1(t);
          if (v == 0.0) return 0.0;
        }
        return v;
      },
      Domain::cube(d));
  return {"smooth_bump", std::move(f), "C-infinity with compact support: every finite r"};
}

/// prod_i (4 x_i (1 - x_i))^deg on [0,1]^d.
inline TestFunction tensor_poly_bump(std::size_t d, int degree) {
  require(degree >= 1, "tensor_poly_bump: degree must be >= 1");
  SampledFunction f(
      [degree](std::span<const double> x) {
        double v = 1.0;
        for (double t : x) {
          if (t < 0.0 || t > 1.0) return 0.0;
          v *= std::pow(4.0 * t * (1.0 - t), degree);
        }
        return v;
      },
      Domain::cube(d));
  return {"tensor_poly_bump(" + std::to_string(degree) + ")", std::move(f),
          "C^" + std::to_string(degree - 1) + " with Lipschitz derivative kinks at 0 and 1: "
          "mixed smoothness r < " + std::to_string(degree) + " + 1/p"};
}

/// Kink location of kink(alpha).
constexpr double kKinkCenter = 1.0 / 3.0;

/// prod_i |x_i - c|^alpha phi(x_i) / phi(c) with the smooth bump phi.
inline TestFunction kink(std::size_t d, double alpha) {
  require(alpha > 0.0, "kink: alpha must be > 0");
  const double pc = testfn_detail::bump1(kKinkCenter);
  SampledFunction f(
      [alpha, pc](std::span<const double> x) {
        double v = 1.0;
        for (double t : x) {
          v *= std::pow(std::abs(t - kKinkCenter), alpha) * testfn_detail::bump1(t) / pc;
          if (v == 0.0) return 0.0;
        }
        return v;
      },
      Domain::cube(d));
  return {"kink(" + std::to_string(alpha) + ")", std::move(f),
          "directional Hoelder kinks of order alpha at x_i = 1/3: mixed smoothness r < alpha + 1/p"};
}

/// Parses "name" or "name(args)".
inline TestFunction make_testfn(const std::string& spec, std::size_t d) {
  require(d >= 1, "test function: d must be >= 1");
  const auto call = testfn_detail::split_call(spec);
  if (call.name == "smooth_bump") {
    require(call.arg.empty(), "smooth_bump takes no parameter");
    return smooth_bump(d);
  }
  if (call.name == "tensor_bspline") {
    require(!call.arg.empty(), "tensor_bspline needs an order, e.g. tensor_bspline(4)");
    const auto comma = call.arg.find(',');
    const int order = static_cast<int>(
        testfn_detail::parse_number(call.arg.substr(0, comma), "tensor_bspline order"));
    const int level = comma == std::string::npos
                          ? -1
                          : static_cast<int>(testfn_detail::parse_number(
                                call.arg.substr(comma + 1), "tensor_bspline level"));
    return tensor_bspline(d, order, level);
  }
  if (call.name == "tensor_poly_bump") {
    const int deg = call.arg.empty() ? 2
                                     : static_cast<int>(testfn_detail::parse_number(
                                           call.arg, "tensor_poly_bump degree"));
    return tensor_poly_bump(d, deg);
  }
  if (call.name == "kink") {
    const double a = call.arg.empty() ? 1.5 : testfn_detail::parse_number(call.arg, "kink alpha");
    return kink(d, a);
  }
  throw ConfigError("unknown test function '" + call.name + "'; supported: " +
                    kTestFunctionNames);
}

/// Random member of V_N: sum_k c_k prod_i N_o(2^N x_i - k_i) over every k
/// whose support meets [0,1]^d, with c_k uniform in [-1, 1]. The domain is
/// the bounding box of the supports.
inline SampledFunction random_spline(std::size_t d, int order, int level, std::uint64_t seed) {
  require(order >= 1 && level >= 0, "random_spline: bad order or level");
  const long lo = 1 - order, hi = (1L << level) - 1;
  const long width = hi - lo + 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(width);
  auto coef = std::make_shared<std::vector<double>>(total);
  for (auto& c : *coef) c = u(rng);
  auto n = std::make_shared<PiecewisePolynomial>(bspline(order));
  const double s = std::ldexp(1.0, level);
  Domain dom = Domain::cube(d, static_cast<double>(lo) / s, static_cast<double>(hi + order) / s);
  return SampledFunction(
      [=](std::span<const double> x) {
        std::vector<long> first(d);
        std::vector<std::vector<double>> w(d);
        for (std::size_t i = 0; i < d; ++i) {
          const double t = s * x[i];
          first[i] = static_cast<long>(std::floor(t)) - order + 1;
          for (int r = 0; r < order; ++r) {
            const long k = first[i] + r;
            w[i].push_back(k < lo || k > hi ? 0.0 : (*n)(t - static_cast<double>(k)));
          }
        }
        double total_v = 0.0;
        std::vector<int> pos(d, 0);
        while (true) {
          double v = 1.0;
          std::size_t flat = 0;
          for (std::size_t i = 0; i < d && v != 0.0; ++i) {
            v *= w[i][static_cast<std::size_t>(pos[i])];
            flat = flat * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(first[i] + pos[i] - lo);
          }
          if (v != 0.0) total_v += v * (*coef)[flat];
          std::size_t i = d;
          while (i > 0 && pos[i - 1] + 1 == order) pos[--i] = 0;
          if (i == 0) return total_v;
          ++pos[i - 1];
        }
      },
      dom);
}

}  // namespace faber
