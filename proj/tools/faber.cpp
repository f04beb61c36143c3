#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "faber/analysis.hpp"
#include "faber/approx.hpp"
#include "faber/basis.hpp"
#include "faber/config.hpp"
#include "faber/errors.hpp"
#include "faber/experiment.hpp"
#include "faber/io.hpp"
#include "faber/seqnorm.hpp"
#include "faber/testfn.hpp"
#include "faber/verify.hpp"

namespace fs = std::filesystem;
using namespace faber;

namespace {

struct Globals {
  unsigned threads = 1;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

// a:b:n
struct GridSpec {
  double a = 0, b = 1;
  std::size_t n = 2;
};

GridSpec parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  require(parts.size() == 3, "grid must look like a:b:n, got '" + s + "'");
  GridSpec g{parse_real(parts[0], "grid start"), parse_real(parts[1], "grid end"), 0};
  const double n = parse_real(parts[2], "grid count");
  require(n >= 2 && n == std::floor(n) && n <= 1e7, "grid count must be an integer >= 2");
  require(g.b > g.a, "grid: need a < b");
  g.n = static_cast<std::size_t>(n);
  return g;
}

std::vector<std::size_t> parse_budgets(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& part : split(s, ',')) {
    const double v = parse_real(part, "budget");
    require(v >= 0 && v == std::floor(v), "budgets must be nonnegative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

fs::path resolve(const Globals& g, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : fs::path(g.out_dir) / path;
}

void emit(const Globals& g, const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(resolve(g, out), text);
  }
}

BesovParams params_from(double r, const std::string& p, const std::string& theta,
                        const std::string& kind) {
  BesovParams bp{r, parse_real(p, "p"), parse_real(theta, "theta"), BesovParams::parse_kind(kind)};
  bp.validate();
  return bp;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faber: Faber spline analysis, sequence norms and adaptive approximation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--tol", g.tol, "Coefficient solve tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out-dir", g.out_dir, "Directory for relative output paths");

  // basis
  auto* basis = app.add_subcommand("basis", "Basis building blocks");
  basis->require_subcommand(1);
  int bm = 2;
  std::string what = "wavelet", bout;
  auto* dump = basis->add_subcommand("dump", "Dump a kernel or coefficient table as JSON");
  dump->add_option("--m", bm, "Half order m")->check(CLI::Range(1, 6));
  dump->add_option("--what", what, "bspline|wavelet|lift|dualcoef|cardcoef")
      ->check(CLI::IsMember({"bspline", "wavelet", "lift", "dualcoef", "cardcoef"}));
  dump->add_option("--out", bout, "Output file (default stdout)");
  int bj = 0;
  long bk = 0;
  std::string grid = "-2:5:701";
  auto* beval = basis->add_subcommand("eval", "Evaluate s_{2m;j,k} on a grid (CSV x,value)");
  beval->add_option("--m", bm, "Half order m")->check(CLI::Range(1, 6));
  beval->add_option("--j", bj, "Level (>= -1)")->check(CLI::Range(-1, 30));
  beval->add_option("--k", bk, "Translation");
  beval->add_option("--grid", grid, "a:b:n");
  beval->add_option("--out", bout, "Output file (default stdout)");

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "Analyze a test function into a coefficient tensor");
  std::string fn = "smooth_bump", cap = "hyp:6", cout_path = "tensor.json";
  std::size_t d = 2;
  int m = 2;
  double drop_tol = 1e-14;
  coeffs->add_option("--fn", fn, std::string("Test function: ") + kTestFunctionNames);
  coeffs->add_option("--d", d, "Dimension")->check(CLI::Range(1, 4));
  coeffs->add_option("--m", m, "Half order m")->check(CLI::Range(1, 3));
  coeffs->add_option("--cap", cap, "inf:N or hyp:J");
  coeffs->add_option("--drop-tol", drop_tol, "Drop |lambda| below this");
  coeffs->add_option("--out", cout_path, "Output tensor JSON");

  // norm
  auto* norm = app.add_subcommand("norm", "Sequence norm of a tensor, with a per-level breakdown");
  std::string tensor_path, kind = "b", p = "2", theta = "2", q = "2";
  double r = 0.0;
  norm->add_option("--tensor", tensor_path, "Tensor JSON")->required();
  norm->add_option("--kind", kind, "b or f");
  norm->add_option("--r", r, "Smoothness r");
  norm->add_option("--p", p, "p (number or inf)");
  norm->add_option("--theta", theta, "theta (number or inf)");

  // compress
  auto* compress = app.add_subcommand("compress", "Greedy selection on a tensor");
  std::size_t budget = 16;
  std::string variant = "large", score = "lq", sel_out;
  std::optional<int> base_level;
  compress->add_option("--tensor", tensor_path, "Tensor JSON")->required();
  compress->add_option("--n", budget, "Budget n");
  compress->add_option("--variant", variant, "large or small");
  compress->add_option("--score", score, "lq or sequence");
  compress->add_option("--q", q, "Target q (number or inf)");
  compress->add_option("--base-level", base_level, "Fully kept hyperbolic level");
  compress->add_option("--r", r, "Smoothness r");
  compress->add_option("--p", p, "p");
  compress->add_option("--theta", theta, "theta");
  compress->add_option("--kind", kind, "b or f");
  compress->add_option("--out", sel_out, "Selection JSON (default stdout)");

  // rates
  auto* rates = app.add_subcommand("rates", "Run the budget sweep and fit the error rate");
  std::string config_path, budgets_text, report_out = "report.csv";
  bool timing = false;
  ExperimentConfig defaults;
  int tail = defaults.tail_depth;
  r = defaults.params.r;
  rates->add_option("--config", config_path, "Config JSON; flags given explicitly override it");
  rates->add_option("--fn", fn, "Test function");
  rates->add_option("--d", d, "Dimension")->check(CLI::Range(1, 4));
  rates->add_option("--m", m, "Half order m")->check(CLI::Range(1, 3));
  rates->add_option("--r", r, "Smoothness r");
  rates->add_option("--p", p, "p");
  rates->add_option("--theta", theta, "theta");
  rates->add_option("--kind", kind, "b or f");
  rates->add_option("--q", q, "Target q");
  rates->add_option("--budgets", budgets_text, "Comma-separated budgets");
  rates->add_option("--variant", variant, "large or small");
  rates->add_option("--score", score, "lq or sequence");
  rates->add_option("--tail-depth", tail, "Layers beyond the base level")->check(CLI::NonNegativeNumber);
  rates->add_option("--out", report_out, "Report CSV name inside --out-dir");
  rates->add_flag("--timing", timing, "Record milliseconds in report.csv");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");

  // plotdata
  auto* plot = app.add_subcommand("plotdata", "Merge reports and write basis profiles");
  std::vector<std::string> reports, profiles;
  plot->add_option("--report", reports, "report.csv files");
  plot->add_option("--profile", profiles, "m,j,k basis profiles");
  plot->add_option("--grid", grid, "Profile grid a:b:n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*basis) {
      const auto sys = BasisSystem::build(bm, 40, g.tol);
      if (*dump) {
        nlohmann::json j;
        if (what == "bspline") j = to_json(sys->bspline(), 2 * bm, "N_" + std::to_string(2 * bm));
        else if (what == "wavelet") j = to_json(chui_wang(bm), 2 * bm, "psi_" + std::to_string(bm));
        else if (what == "lift") j = to_json(sys->kernel(), 2 * bm, "v_" + std::to_string(2 * bm));
        else if (what == "dualcoef") j = to_json(sys->dual(), "a^(" + std::to_string(bm) + ")");
        else j = to_json(sys->cardinal(), "c^(" + std::to_string(2 * bm) + ")");
        emit(g, bout, j.dump(2) + "\n");
      } else {
        const auto gs = parse_grid(grid);
        std::string s = "x,value\n";
        for (std::size_t i = 0; i < gs.n; ++i) {
          const double x = gs.a + (gs.b - gs.a) * static_cast<double>(i) /
                                      static_cast<double>(gs.n - 1);
          s += format_double(x) + "," + format_double(eval_univariate(*sys, bj, bk, x)) + "\n";
        }
        emit(g, bout, s);
      }
    } else if (*coeffs) {
      const auto tf = make_testfn(fn, d);
      const auto c = CapSpec::parse(cap);
      require(estimated_samples(c, tf.f.domain(), m) < kMaxSamples,
              "cap " + c.to_string() + " needs more than 1e7 samples");
      const auto sys = BasisSystem::build(m, 40, g.tol);
      const auto t = analyze(tf.f, *sys, c, {g.threads, drop_tol});
      write_json(resolve(g, cout_path), to_json(t));
      std::cout << tf.name << ": " << t.size() << " coefficients, " << t.samples_used
                << " samples\n";
    } else if (*norm) {
      const auto t = tensor_from_json(read_json(tensor_path));
      const auto bp = params_from(r, p, theta, kind);
      std::cout << "norm," << format_double(sequence_norm(t, bp)) << "\n";
      std::cout << "j,entries,weighted\n";
      for (const auto& l : level_breakdown(t, bp)) {
        std::string j;
        for (std::size_t i = 0; i < l.j.size(); ++i) j += (i ? " " : "") + std::to_string(l.j[i]);
        std::cout << j << "," << l.entries << "," << format_double(l.weighted) << "\n";
      }
    } else if (*compress) {
      const auto t = tensor_from_json(read_json(tensor_path));
      SelectionPlan plan;
      plan.budget = budget;
      plan.variant = parse_variant(variant);
      plan.score = parse_score(score);
      plan.base_level = base_level;
      plan.params = params_from(r, p, theta, kind);
      const double qv = parse_real(q, "q");
      const auto sel = greedy_select(t, plan, qv);
      emit(g, sel_out,
           to_json(SelectionRecord{budget, variant, score, qv, sel}).dump(2) + "\n");
      std::cerr << "kept " << sel.size() << " of " << t.size() << ", residual norm "
                << format_double(residual_norm(t, sel, plan.params)) << "\n";
    } else if (*rates) {
      ExperimentConfig c = config_path.empty() ? ExperimentConfig{}
                                               : config_from_json(read_json(config_path));
      auto given = [&](const char* name) { return rates->count(name) > 0; };
      if (given("--fn")) c.function = fn;
      if (given("--d")) c.d = d;
      if (given("--m")) c.m = m;
      if (given("--r")) c.params.r = r;
      if (given("--p")) c.params.p = parse_real(p, "p");
      if (given("--theta")) c.params.theta = parse_real(theta, "theta");
      if (given("--kind")) c.params.kind = BesovParams::parse_kind(kind);
      if (given("--q")) c.q = parse_real(q, "q");
      if (given("--budgets")) c.budgets = parse_budgets(budgets_text);
      if (given("--variant")) c.variant = parse_variant(variant);
      if (given("--score")) c.score = parse_score(score);
      if (given("--tail-depth")) c.tail_depth = tail;
      if (timing) c.record_timing = true;
      if (app.count("--threads")) c.threads = g.threads;
      if (app.count("--tol")) c.tol = g.tol;
      if (app.count("--seed")) c.seed = g.seed;
      if (app.count("--out-dir") || config_path.empty()) c.out_dir = g.out_dir;
      c.validate();
      const auto res = run(c, true);
      if (report_out != "report.csv")
        write_text(fs::path(c.out_dir) / report_out, report_csv(res.report));
      write_json(fs::path(c.out_dir) / "config.json", to_json(c));
      std::cout << res.summary;
    } else if (*verify) {
      return verify::run_acceptance(std::cout, g.threads) == 0 ? 0 : 1;
    } else if (*plot) {
      std::vector<fs::path> paths(reports.begin(), reports.end());
      std::vector<ProfileRequest> reqs;
      const auto gs = parse_grid(grid);
      for (const auto& spec : profiles) {
        const auto f = split(spec, ',');
        require(f.size() == 3, "profile must look like m,j,k, got '" + spec + "'");
        ProfileRequest pr;
        pr.m = static_cast<int>(parse_real(f[0], "profile m"));
        pr.j = static_cast<int>(parse_real(f[1], "profile j"));
        pr.k = static_cast<long>(parse_real(f[2], "profile k"));
        require(pr.m >= 1 && pr.m <= 6 && pr.j >= -1, "profile: m in [1, 6] and j >= -1");
        pr.a = gs.a;
        pr.b = gs.b;
        pr.points = gs.n;
        reqs.push_back(pr);
      }
      const auto bundle = emit_plot_data(paths, reqs, g.out_dir);
      for (const auto& f : bundle.files) std::cout << f.string() << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
