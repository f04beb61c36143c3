#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "faber/analysis.hpp"
#include "faber/approx.hpp"
#include "faber/errors.hpp"
#include "faber/seqnorm.hpp"
#include "faber/tensor.hpp"

namespace faber {

/// Largest number of samples an experiment may request.
constexpr double kMaxSamples = 1e7;

/// JSON numbers cannot hold infinity; "inf" strings are used instead.
inline nlohmann::json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double number_from_json(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError(what + " must be a number or \"inf\"");
}

/// Parses a number that may be written "inf".
inline double parse_real(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(what + ": '" + s + "' is not a number");
}

struct ExperimentConfig {
  std::string function = "smooth_bump";
  std::size_t d = 2;
  int m = 2;
  BesovParams params{2.0, 2.0, 2.0, BesovParams::Kind::b};
  double q = 2.0;
  std::vector<std::size_t> budgets{16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192};
  Variant variant = Variant::large_smoothness;
  ScoreRule score = ScoreRule::lq;
  int tail_depth = 3;
  /// Cap of the coefficient-only workflow (faber coeffs).
  CapSpec cap = CapSpec::hyperbolic(6);
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double drop_tol = 1e-14;
  int window = 40;
  double tol = 1e-12;
  /// Write measured milliseconds into report.csv (breaks byte-identical
  /// reruns); timings always go to timing.json.
  bool record_timing = false;
  /// Also evaluate the hyperbolic cross at matched coefficient counts.
  bool compare_hyperbolic = true;

  void validate() const {
    require(d >= 1 && d <= 4, "config: d must be in [1, 4]");
    require(m >= 1 && m <= 3, "config: m must be 1, 2 or 3");
    params.validate();
    require(q > 0.0, "config: q must be positive");
    for (std::size_t i = 1; i < budgets.size(); ++i)
      require(budgets[i] > budgets[i - 1], "config: budgets must be strictly increasing");
    require(tail_depth >= 0, "config: tail_depth must be >= 0");
    require(threads >= 1, "config: threads must be >= 1");
    require(drop_tol >= 0.0, "config: drop_tol must be >= 0");
    require(window >= 4, "config: window must be >= 4");
    require(tol > 0.0, "config: tol must be positive");
    require(estimated_samples(cap, Domain::cube(d), m) < kMaxSamples,
            "config: cap " + cap.to_string() + " needs more than 1e7 samples");
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"schema", "faber-config/1"},
          {"function", c.function},
          {"d", c.d},
          {"m", c.m},
          {"r", number_to_json(c.params.r)},
          {"p", number_to_json(c.params.p)},
          {"theta", number_to_json(c.params.theta)},
          {"kind", c.params.kind_name()},
          {"q", number_to_json(c.q)},
          {"budgets", c.budgets},
          {"variant", to_string(c.variant)},
          {"score", to_string(c.score)},
          {"tail_depth", c.tail_depth},
          {"cap", c.cap.to_string()},
          {"out_dir", c.out_dir},
          {"seed", c.seed},
          {"threads", c.threads},
          {"drop_tol", c.drop_tol},
          {"window", c.window},
          {"tol", c.tol},
          {"record_timing", c.record_timing},
          {"compare_hyperbolic", c.compare_hyperbolic}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  require(j.is_object(), "config: expected a JSON object");
  ExperimentConfig c;
  static const std::vector<std::string> known{
      "schema", "function", "d",     "m",      "r",         "p",        "theta",
      "kind",   "q",        "budgets", "variant", "score",   "tail_depth", "cap",
      "out_dir", "seed",    "threads", "drop_tol", "window", "tol",      "record_timing",
      "compare_hyperbolic"};
  for (const auto& [key, value] : j.items())
    require(std::find(known.begin(), known.end(), key) != known.end(),
            "config: unknown key '" + key + "'");
  try {
    if (j.contains("schema"))
      require(j["schema"] == "faber-config/1", "config: unsupported schema");
    if (j.contains("function")) c.function = j["function"].get<std::string>();
    if (j.contains("d")) c.d = j["d"].get<std::size_t>();
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("r")) c.params.r = number_from_json(j["r"], "r");
    if (j.contains("p")) c.params.p = number_from_json(j["p"], "p");
    if (j.contains("theta")) c.params.theta = number_from_json(j["theta"], "theta");
    if (j.contains("kind")) c.params.kind = BesovParams::parse_kind(j["kind"].get<std::string>());
    if (j.contains("q")) c.q = number_from_json(j["q"], "q");
    if (j.contains("budgets")) c.budgets = j["budgets"].get<std::vector<std::size_t>>();
    if (j.contains("variant")) c.variant = parse_variant(j["variant"].get<std::string>());
    if (j.contains("score")) c.score = parse_score(j["score"].get<std::string>());
    if (j.contains("tail_depth")) c.tail_depth = j["tail_depth"].get<int>();
    if (j.contains("cap")) c.cap = CapSpec::parse(j["cap"].get<std::string>());
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("drop_tol")) c.drop_tol = j["drop_tol"].get<double>();
    if (j.contains("window")) c.window = j["window"].get<int>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("record_timing")) c.record_timing = j["record_timing"].get<bool>();
    if (j.contains("compare_hyperbolic"))
      c.compare_hyperbolic = j["compare_hyperbolic"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace faber
