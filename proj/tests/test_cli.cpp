#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "faber/experiment.hpp"
#include "faber/io.hpp"
#include "faber/testfn.hpp"

using namespace faber;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("faber_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const int status = std::system((std::string(FABER_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(TestFunctions, BsplineCenter) {
  const auto tf = make_testfn("tensor_bspline(4)", 2);
  const double x[] = {0.5, 0.5};
  EXPECT_NEAR(tf.f(x), 4.0 / 9.0, 1e-15);
}

TEST(TestFunctions, BumpVanishesOutside) {
  const auto tf = make_testfn("smooth_bump", 2);
  const double out[] = {1.2, 0.5};
  const double edge[] = {0.0, 0.5};
  const double mid[] = {0.5, 0.5};
  EXPECT_EQ(tf.f(out), 0.0);
  EXPECT_EQ(tf.f(edge), 0.0);
  EXPECT_NEAR(tf.f(mid), 1.0, 1e-15);
}

TEST(TestFunctions, KinkSliceNearCenter) {
  const auto tf = kink(1, 1.5);
  for (double h : {1e-3, 1e-2}) {
    const double x[] = {kKinkCenter + h};
    EXPECT_NEAR(tf.f(x) / std::pow(h, 1.5), 1.0, 10 * h);
  }
}

TEST(TestFunctions, UnknownNameListsSupported) {
  try {
    make_testfn("wiggle", 1);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("smooth_bump"), std::string::npos);
  }
}

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.function = "kink(1.25)";
  c.d = 3;
  c.params = {1.5, kInf, 0.5, BesovParams::Kind::f};
  c.params.p = 3.0;
  c.q = kInf;
  c.budgets = {4, 8, 99};
  c.variant = Variant::small_smoothness;
  c.score = ScoreRule::sequence;
  c.cap = CapSpec::max_level(3);
  c.seed = 12345678901234ULL;
  c.threads = 3;
  c.drop_tol = 1.0 / 3.0;
  c.tol = 1e-11;
  const auto text = to_json(c).dump();
  EXPECT_EQ(config_from_json(nlohmann::json::parse(text)), c);
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json({{"dd", 2}}), ConfigError);
  EXPECT_THROW(config_from_json({{"d", 5}}), ConfigError);
  EXPECT_THROW(config_from_json({{"m", 4}}), ConfigError);
  EXPECT_THROW(config_from_json({{"d", "two"}}), ConfigError);
  EXPECT_THROW(config_from_json({{"cap", "hyp:40"}}), ConfigError);
  EXPECT_THROW(config_from_json({{"budgets", {8, 4}}}), ConfigError);
}

TEST(Io, TensorRoundTrip) {
  CoefficientTensor t(2, 3);
  t.insert(DyadicIndex({-1, 2}, {0, 3}), 0.1);
  t.insert(DyadicIndex({1, 1}, {1, 0}), -1.0 / 3.0);
  t.cap = CapSpec::hyperbolic(4);
  t.samples_used = 17;
  const auto back = tensor_from_json(nlohmann::json::parse(to_json(t).dump()));
  EXPECT_EQ(back.levels(), t.levels());
  EXPECT_EQ(back.cap, t.cap);
  EXPECT_EQ(back.samples_used, 17u);
  EXPECT_EQ(back.m(), 3);
}

TEST(Io, TensorSchemaMismatch) {
  EXPECT_THROW(tensor_from_json({{"schema", "other/1"}}), ConfigError);
  auto j = to_json(CoefficientTensor(1, 2));
  j["levels"] = {{{"j", {0}}, {"entries", {{1, 2, 3}}}}};
  EXPECT_THROW(tensor_from_json(j), ConfigError);
}

TEST(Io, SelectionRoundTrip) {
  SelectionRecord s{8, "large", "lq", kInf, {DyadicIndex({0}, {1}), DyadicIndex({2}, {3})}};
  const auto back = selection_from_json(nlohmann::json::parse(to_json(s).dump()));
  EXPECT_EQ(back.indices, s.indices);
  EXPECT_TRUE(std::isinf(back.q));
}

TEST(Io, ReportRoundTripAndHeader) {
  ErrorReport r;
  r.add({1, 0.1, 10, 1, 0});
  r.add({4, 1.0 / 3.0, 20, 7, 1.5});
  const auto back = report_from_csv(report_csv(r));
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].error, 1.0 / 3.0);
  EXPECT_EQ(back.rows[1].kept, 7u);
  EXPECT_THROW(report_from_csv("n,err\n1,2\n"), ConfigError);
  EXPECT_THROW(report_from_csv(std::string(kReportHeader) + "\n1,x,1,1,0\n"), ConfigError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr), 1.0 / 3.0);
}

TEST(Run, ZeroBudgetGivesFunctionNorm) {
  ExperimentConfig c;
  c.function = "tensor_poly_bump(1)";
  c.d = 1;
  c.budgets = {0};
  c.compare_hyperbolic = false;
  const auto res = run(c, false);
  ASSERT_EQ(res.report.rows.size(), 1u);
  EXPECT_EQ(res.report.rows[0].kept, 0u);
  // || 4x(1-x) ||_2 = sqrt(8/15)
  EXPECT_NEAR(res.report.rows[0].error, std::sqrt(8.0 / 15.0), 1e-4);
}

TEST(Run, ReproductionCase) {
  ExperimentConfig c;
  c.function = "tensor_bspline(4)";
  c.d = 2;
  c.budgets = {100000};
  const auto res = run(c, false);
  EXPECT_LT(res.report.rows.back().error, 1e-7);
}

TEST(Run, ArtifactsAndByteIdenticalReruns) {
  const auto dir = scratch("rerun");
  ExperimentConfig c;
  c.d = 1;
  c.budgets = {2, 4, 8, 16, 32, 64, 128, 256};
  c.out_dir = dir.string();
  const auto first = run(c, true);
  for (const char* f : {"tensor.json", "report.csv", "rates.json", "sel-8.json", "hyperbolic.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_FALSE(fs::exists(dir / "run.failed"));
  const auto a = slurp(dir / "report.csv");
  run(c, true);
  EXPECT_EQ(slurp(dir / "report.csv"), a);
  EXPECT_EQ(read_report(dir / "report.csv").rows.size(), c.budgets.size());
  c.threads = 2;
  run(c, true);
  EXPECT_EQ(slurp(dir / "report.csv"), a);
  EXPECT_TRUE(first.monotone);
}

TEST(Run, FailureIsStageTagged) {
  const auto dir = scratch("fail");
  ExperimentConfig c;
  c.function = "nope";
  c.out_dir = dir.string();
  try {
    run(c, true);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("[testfn]", 0), 0u);
  }
  EXPECT_TRUE(fs::exists(dir / "run.failed"));
}

TEST(PlotData, MergesReportsAndProfiles) {
  const auto dir = scratch("plot");
  ErrorReport r;
  r.add({1, 0.5});
  r.add({2, 0.25});
  write_text(dir / "a" / "report.csv", report_csv(r));
  const auto b = emit_plot_data({dir / "a" / "report.csv"}, {{2, 0, 0, 0.0, 1.0, 5}}, dir);
  ASSERT_EQ(b.files.size(), 2u);
  EXPECT_EQ(slurp(dir / "series.csv"), "series,n,error\na/report,1,0.5\na/report,2,0.25\n");
  const auto prof = slurp(dir / "profile_m2_j0_k0.csv");
  EXPECT_EQ(prof.rfind("x,value\n0,", 0), 0u);
  const auto empty = emit_plot_data({}, {}, dir / "e");
  EXPECT_EQ(slurp(dir / "e" / "series.csv"), "series,n,error\n");
}

TEST(PlotData, RejectsBadReport) {
  const auto dir = scratch("plotbad");
  write_text(dir / "r.csv", "a,b\n");
  EXPECT_THROW(emit_plot_data({dir / "r.csv"}, {}, dir), ConfigError);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string out = "--out-dir " + dir.string();
  EXPECT_EQ(cli("basis dump --m 2 --what dualcoef"), 0);
  EXPECT_EQ(cli("basis eval --m 3 --j 1 --k 0 --grid 0:1:11"), 0);
  EXPECT_EQ(cli(out + " coeffs --fn smooth_bump --d 2 --m 2 --cap hyp:3 --out t.json"), 0);
  ASSERT_TRUE(fs::exists(dir / "t.json"));
  const auto t = (dir / "t.json").string();
  EXPECT_EQ(cli("norm --tensor " + t + " --kind f --r 1 --p 2 --theta inf"), 0);
  EXPECT_EQ(cli(out + " compress --tensor " + t + " --n 8 --variant small --out s.json"), 0);
  EXPECT_TRUE(fs::exists(dir / "s.json"));
  EXPECT_EQ(cli(out + " rates --fn smooth_bump --d 1 --budgets 2,4,8,16,32,64,128,256"), 0);
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_EQ(cli(out + " plotdata --report " + (dir / "report.csv").string() + " --profile 2,0,0"), 0);
  EXPECT_EQ(cli("coeffs --fn wiggle"), 2);
  EXPECT_EQ(cli("coeffs --cap hyp:40"), 2);
  EXPECT_EQ(cli("norm --tensor /nonexistent.json"), 2);
  EXPECT_EQ(cli("norm --tensor " + t + " --p -1"), 2);
  EXPECT_EQ(cli("bogus"), 2);
  // Too few budgets for a fit: reported, not fatal.
  EXPECT_EQ(cli(out + " rates --d 1 --budgets 2,4"), 0);
}
