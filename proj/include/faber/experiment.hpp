#pragma once

// analyze -> cap -> greedy per budget -> reconstruction error -> rate fit,
// with artifacts written to the output directory.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faber/analysis.hpp"
#include "faber/approx.hpp"
#include "faber/basis.hpp"
#include "faber/config.hpp"
#include "faber/errors.hpp"
#include "faber/io.hpp"
#include "faber/testfn.hpp"

namespace faber {

struct HyperbolicRow {
  std::size_t n = 0;
  /// Hyperbolic cross level whose entry count is the largest not above the
  /// greedy selection size.
  int J = 0;
  std::size_t count = 0;
  double error = 0.0;
};

struct RunResult {
  ErrorReport report;
  std::vector<HyperbolicRow> hyperbolic;
  std::optional<RateFit> fit;
  std::optional<RateFit> power;
  std::string fit_note;
  bool monotone = true;
  std::vector<std::size_t> grid_cells;
  std::vector<double> timings_ms;
  std::string summary;
};

/// Largest error grid run() will sample.
constexpr double kMaxGridPoints = 1 << 26;

namespace detail {

template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  const std::string tag = std::string("[") + stage + "] ";
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(tag + e.what());
  } catch (const EvaluationError& e) {
    throw EvaluationError(tag + e.what());
  }
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs the pipeline. With write = false nothing touches the disk.
inline RunResult run(const ExperimentConfig& c, bool write = true) {
  namespace fs = std::filesystem;
  c.validate();
  const fs::path out = c.out_dir;
  const fs::path failed = out / "run.failed";
  if (write) {
    fs::create_directories(out);
    fs::remove(failed);
  }
  try {
    const auto sys = detail::staged("basis", [&] { return BasisSystem::build(c.m, c.window, c.tol); });
    const auto tf = detail::staged("testfn", [&] { return make_testfn(c.function, c.d); });
    const auto& f = tf.f;
    const std::size_t n_max = c.budgets.empty() ? 0 : c.budgets.back();
    AnalysisOptions aopt{c.threads, c.drop_tol};

    // Analyses by hyperbolic level, shared between budgets.
    std::map<int, CoefficientTensor> by_level;
    auto analysis_at = [&](int J) -> const CoefficientTensor& {
      auto it = by_level.find(J);
      if (it != by_level.end()) return it->second;
      const auto cap = CapSpec::hyperbolic(J);
      require(estimated_samples(cap, f.domain(), c.m) < kMaxSamples,
              "cap " + cap.to_string() + " needs more than 1e7 samples");
      return by_level.emplace(J, analyze(f, *sys, cap, aopt)).first->second;
    };

    auto feasible = [&](int J) {
      return estimated_samples(CapSpec::hyperbolic(J), f.domain(), c.m) < kMaxSamples;
    };

    // Smallest hyperbolic analysis holding more entries than the largest
    // budget; every base level is read off it. Stops early when two further
    // layers add nothing (the function is resolved) or the next cap is too
    // expensive.
    const auto& probe = detail::staged("analyze", [&]() -> const CoefficientTensor& {
      int J = -static_cast<int>(c.d);
      int idle = 0;
      while (true) {
        const auto& t = analysis_at(J);
        if (t.size() > n_max || !feasible(J + 1)) return t;
        if (J > -static_cast<int>(c.d)) idle = by_level.at(J - 1).size() == t.size() ? idle + 1 : 0;
        if (idle >= 2) return t;
        ++J;
      }
    });
    int top_feasible = probe.cap.n;
    while (feasible(top_feasible + 1) && top_feasible < probe.cap.n + c.tail_depth) ++top_feasible;
    std::vector<int> base(c.budgets.size());
    int top_cap = probe.cap.n;
    for (std::size_t i = 0; i < c.budgets.size(); ++i) {
      base[i] = base_level_for(probe, c.budgets[i]);
      top_cap = std::max(top_cap, std::min(base[i] + c.tail_depth, top_feasible));
    }

    // Common error grid: twice the finest direction level of any analysis.
    const int finest = top_cap + static_cast<int>(c.d) - 1;
    const auto grid = make_error_grid(f.domain(), std::vector<int>(c.d, finest));
    require(static_cast<double>(grid.grid.size()) <= kMaxGridPoints,
            "error grid with " + std::to_string(grid.grid.size()) +
                " points is too large; lower the budgets or tail_depth");
    const auto fvals = detail::staged("grid", [&] { return sample_on_grid(f, grid.grid); });

    RunResult res;
    res.grid_cells = grid.cells;
    for (std::size_t i = 0; i < c.budgets.size(); ++i) {
      const std::size_t n = c.budgets[i];
      const auto t0 = std::chrono::steady_clock::now();
      const auto& t = detail::staged("analyze", [&]() -> const CoefficientTensor& {
        return analysis_at(std::min(base[i] + c.tail_depth, top_feasible));
      });
      SelectionPlan plan;
      plan.budget = n;
      plan.variant = c.variant;
      plan.base_level = base[i];
      plan.tail_depth = c.tail_depth;
      plan.score = c.score;
      plan.params = c.params;
      const auto sel = detail::staged("select", [&] { return greedy_select(t, plan, c.q); });
      const double err = detail::staged("error", [&] {
        return reconstruction_error(fvals, grid, t, &sel, *sys, c.q, c.threads);
      });
      const double ms = detail::ms_since(t0);
      res.timings_ms.push_back(ms);
      res.report.add({n, err, t.samples_used, sel.size(), c.record_timing ? ms : 0.0});
      if (write)
        write_json(out / ("sel-" + std::to_string(n) + ".json"),
                   to_json(SelectionRecord{n, to_string(c.variant), to_string(c.score), c.q, sel}));
      if (c.compare_hyperbolic) {
        const int J = base_level_for(t, sel.size());
        const auto hc = hyperbolic_projection(t, J);
        const double e = detail::staged("error", [&] {
          return reconstruction_error(fvals, grid, hc, nullptr, *sys, c.q, c.threads);
        });
        res.hyperbolic.push_back({n, J, hc.size(), e});
      }
    }

    for (std::size_t i = 1; i < res.report.rows.size(); ++i)
      if (res.report.rows[i].error > res.report.rows[i - 1].error) res.monotone = false;
    try {
      res.fit = rate_fit(res.report, c.d);
      res.power = power_fit(res.report);
    } catch (const NumericalError& e) {
      res.fit_note = e.what();
    }

    // One-page summary.
    char line[256];
    std::string s;
    s += "function " + tf.name + "  d=" + std::to_string(c.d) + "  m=" + std::to_string(c.m) +
         "  q=" + format_double(c.q) + "  variant=" + to_string(c.variant) +
         "  score=" + to_string(c.score) + "\n";
    s += "smoothness: " + tf.smoothness + "\n";
    s += "error grid: " + std::to_string(grid.cells[0]) + " cells per direction\n\n";
    std::snprintf(line, sizeof line, "%8s %6s %8s %10s %14s %14s %10s\n", "n", "J", "kept",
                  "samples", "greedy error", "HC error", "HC count");
    s += line;
    for (std::size_t i = 0; i < res.report.rows.size(); ++i) {
      const auto& r = res.report.rows[i];
      const bool hc = i < res.hyperbolic.size();
      char hce[32] = "-";
      if (hc) std::snprintf(hce, sizeof hce, "%.6e", res.hyperbolic[i].error);
      std::snprintf(line, sizeof line, "%8zu %6d %8zu %10zu %14.6e %14s %10s\n", r.n, base[i],
                    r.kept, r.samples, r.error, hce,
                    hc ? std::to_string(res.hyperbolic[i].count).c_str() : "-");
      s += line;
    }
    s += "\n";
    if (res.fit) {
      std::snprintf(line, sizeof line,
                    "rate fit: slope %.4f  log exponent %.4f  residual %.3e  (power law only: "
                    "slope %.4f)\n",
                    res.fit->slope, res.fit->log_exponent, res.fit->residual, res.power->slope);
      s += line;
    } else {
      s += "rate fit: not available (" + res.fit_note + ")\n";
    }
    s += std::string("monotone decay: ") + (res.monotone ? "yes" : "no") + "\n";
    res.summary = s;

    if (write) {
      const auto& biggest = by_level.rbegin()->second;
      write_json(out / "tensor.json", to_json(biggest));
      write_text(out / "report.csv", report_csv(res.report));
      std::string hcsv = "n,J,count,error\n";
      for (const auto& h : res.hyperbolic)
        hcsv += std::to_string(h.n) + "," + std::to_string(h.J) + "," + std::to_string(h.count) +
                "," + format_double(h.error) + "\n";
      write_text(out / "hyperbolic.csv", hcsv);
      nlohmann::json rates{{"schema", "faber-rates/1"},
                           {"config", to_json(c)},
                           {"monotone", res.monotone},
                           {"grid_cells", res.grid_cells}};
      if (res.fit) {
        rates["fit"] = {{"slope", res.fit->slope},
                        {"log_exponent", res.fit->log_exponent},
                        {"intercept", res.fit->intercept},
                        {"residual", res.fit->residual},
                        {"points", res.fit->points}};
        rates["power_fit"] = {{"slope", res.power->slope}, {"residual", res.power->residual}};
      } else {
        rates["fit"] = nullptr;
        rates["fit_note"] = res.fit_note;
      }
      write_json(out / "rates.json", rates);
      nlohmann::json timing{{"schema", "faber-timing/1"}, {"budgets", c.budgets},
                            {"ms", res.timings_ms}};
      write_json(out / "timing.json", timing);
    }
    return res;
  } catch (const std::exception& e) {
    if (write) write_text(failed, std::string(e.what()) + "\n");
    throw;
  }
}

struct PlotBundle {
  std::vector<std::filesystem::path> files;
};

struct ProfileRequest {
  int m = 2;
  int j = 0;
  long k = 0;
  double a = -2.0;
  double b = 5.0;
  std::size_t points = 701;
};

/// Merges reports into one long CSV (series,n,error) and writes basis
/// profiles (x,value).
inline PlotBundle emit_plot_data(const std::vector<std::filesystem::path>& reports,
                                 const std::vector<ProfileRequest>& profiles,
                                 const std::filesystem::path& out_dir) {
  PlotBundle b;
  std::string csv = "series,n,error\n";
  for (const auto& p : reports) {
    const auto r = read_report(p);
    const auto series = p.parent_path().filename().string().empty()
                            ? p.stem().string()
                            : p.parent_path().filename().string() + "/" + p.stem().string();
    for (const auto& row : r.rows)
      csv += series + "," + std::to_string(row.n) + "," + format_double(row.error) + "\n";
  }
  const auto series_path = out_dir / "series.csv";
  write_text(series_path, csv);
  b.files.push_back(series_path);
  for (const auto& pr : profiles) {
    require(pr.points >= 2 && pr.b > pr.a, "profile: need b > a and at least 2 points");
    const auto sys = BasisSystem::build(pr.m);
    std::string s = "x,value\n";
    for (std::size_t i = 0; i < pr.points; ++i) {
      const double x =
          pr.a + (pr.b - pr.a) * static_cast<double>(i) / static_cast<double>(pr.points - 1);
      s += format_double(x) + "," + format_double(eval_univariate(*sys, pr.j, pr.k, x)) + "\n";
    }
    const auto path = out_dir / ("profile_m" + std::to_string(pr.m) + "_j" + std::to_string(pr.j) +
                                 "_k" + std::to_string(pr.k) + ".csv");
    write_text(path, s);
    b.files.push_back(path);
  }
  return b;
}

}  // namespace faber
