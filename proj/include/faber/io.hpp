#pragma once

// Persistence: tensors and selections as JSON, error reports as CSV, basis
// building blocks as JSON / CSV.

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "faber/approx.hpp"
#include "faber/basis.hpp"
#include "faber/config.hpp"
#include "faber/errors.hpp"
#include "faber/tensor.hpp"

namespace faber {

constexpr const char* kTensorSchema = "faber-tensor/1";
constexpr const char* kSelectionSchema = "faber-selection/1";
constexpr const char* kReportHeader = "n,error,samples,kept,ms";

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline nlohmann::json to_json(const CoefficientTensor& t) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& [j, entries] : t.levels()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [k, v] : entries) {
      nlohmann::json row = nlohmann::json::array();
      for (int x : k) row.push_back(x);
      row.push_back(v);
      rows.push_back(std::move(row));
    }
    levels.push_back({{"j", j}, {"entries", std::move(rows)}});
  }
  return {{"schema", kTensorSchema},
          {"d", t.dim()},
          {"m", t.m()},
          {"cap", t.cap.to_string()},
          {"drop_tol", t.drop_tol()},
          {"domain", {{"lo", t.domain.lo}, {"hi", t.domain.hi}}},
          {"levels", std::move(levels)},
          {"samples_used", t.samples_used}};
}

inline CoefficientTensor tensor_from_json(const nlohmann::json& j) {
  try {
    require(j.value("schema", "") == kTensorSchema, "tensor: unsupported or missing schema");
    const auto d = j.at("d").get<std::size_t>();
    CoefficientTensor t(d, j.at("m").get<int>(), j.value("drop_tol", 1e-14));
    t.cap = CapSpec::parse(j.at("cap").get<std::string>());
    if (j.contains("domain")) {
      t.domain.lo = j["domain"].at("lo").get<std::vector<double>>();
      t.domain.hi = j["domain"].at("hi").get<std::vector<double>>();
    }
    t.samples_used = j.value("samples_used", std::size_t{0});
    for (const auto& lv : j.at("levels")) {
      const auto lj = lv.at("j").get<MultiIndex>();
      require(lj.size() == d, "tensor: level dimension mismatch");
      CoefficientTensor::Level entries;
      for (const auto& row : lv.at("entries")) {
        require(row.is_array() && row.size() == d + 1, "tensor: entry must be [k..., value]");
        MultiIndex k(d);
        for (std::size_t i = 0; i < d; ++i) k[i] = row[i].get<int>();
        entries[k] = row[d].get<double>();
      }
      for (int v : lj) require(v >= -1, "tensor: levels must be >= -1");
      t.insert_level(lj, std::move(entries));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tensor: ") + e.what());
  }
}

struct SelectionRecord {
  std::size_t budget = 0;
  std::string variant;
  std::string score;
  double q = 2.0;
  IndexSet indices;
};

inline nlohmann::json to_json(const SelectionRecord& s) {
  nlohmann::json idx = nlohmann::json::array();
  for (const auto& i : s.indices) idx.push_back({{"j", i.j}, {"k", i.k}});
  return {{"schema", kSelectionSchema}, {"budget", s.budget},    {"variant", s.variant},
          {"score", s.score},           {"q", number_to_json(s.q)}, {"kept", s.indices.size()},
          {"indices", std::move(idx)}};
}

inline SelectionRecord selection_from_json(const nlohmann::json& j) {
  try {
    require(j.value("schema", "") == kSelectionSchema, "selection: unsupported or missing schema");
    SelectionRecord s;
    s.budget = j.at("budget").get<std::size_t>();
    s.variant = j.value("variant", "");
    s.score = j.value("score", "");
    s.q = number_from_json(j.at("q"), "selection q");
    for (const auto& e : j.at("indices"))
      s.indices.emplace_back(e.at("j").get<MultiIndex>(), e.at("k").get<MultiIndex>());
    normalize(s.indices);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("selection: ") + e.what());
  }
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), "write failed: " + path.string());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline std::string report_csv(const ErrorReport& r) {
  std::string s = std::string(kReportHeader) + "\n";
  for (const auto& row : r.rows)
    s += std::to_string(row.n) + "," + format_double(row.error) + "," +
         std::to_string(row.samples) + "," + std::to_string(row.kept) + "," +
         format_double(row.ms) + "\n";
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline ErrorReport report_from_csv(const std::string& text, const std::string& source = "report") {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kReportHeader,
          source + ": expected header '" + std::string(kReportHeader) + "', got '" + line + "'");
  ErrorReport r;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    require(f.size() == 5, source + ": expected 5 columns in '" + line + "'");
    try {
      r.add({std::stoul(f[0]), std::stod(f[1]), std::stoul(f[2]), std::stoul(f[3]),
             std::stod(f[4])});
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ConfigError*>(&e)) throw;
      throw ConfigError(source + ": bad row '" + line + "'");
    }
  }
  return r;
}

inline ErrorReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return report_from_csv(ss.str(), path.string());
}

/// JSON dump of a piecewise polynomial.
inline nlohmann::json to_json(const PiecewisePolynomial& p, int order, const std::string& what) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : p.segments()) segs.push_back(s);
  return {{"order", order},
          {"breakpoints", p.breakpoints()},
          {"segments", std::move(segs)},
          {"meta",
           {{"what", what},
            {"form", "segment i holds c_r with p(x) = sum_r c_r (x - breakpoints[i])^r"},
            {"degree", p.degree()}}}};
}

/// JSON dump of a coefficient table.
inline nlohmann::json to_json(const CoefficientSequence& c, const std::string& what) {
  nlohmann::json n = nlohmann::json::array();
  for (long i = -c.window(); i <= c.window(); ++i) n.push_back(i);
  return {{"order", c.order()},
          {"breakpoints", nlohmann::json::array()},
          {"segments", nlohmann::json::array()},
          {"n", std::move(n)},
          {"values", c.values()},
          {"meta",
           {{"what", what},
            {"kind", to_string(c.kind())},
            {"window", c.window()},
            {"residual", c.residual()},
            {"rcond", c.rcond()},
            {"tail_bound", c.tail_bound()}}}};
}

}  // namespace faber
