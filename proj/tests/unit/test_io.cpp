#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "maptest/config.hpp"
#include "maptest/csv.hpp"
#include "maptest/error.hpp"
#include "maptest/svg.hpp"
#include "maptest/sweep_io.hpp"

using namespace maptest;
namespace fs = std::filesystem;

namespace {

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepResult sample_result() {
  SweepResult r;
  for (int i = 0; i < 4; ++i) {
    SweepRecord rec;
    rec.sigma = std::pow(0.9, i) * 0.1;
    rec.exact_unreg = 0.1 + 0.01 * i;
    rec.exact_oracle_map = 0.3 + 0.1 * i;
    rec.bound_xi = 0.1 / 3.0;
    if (i % 2 == 0) {
      rec.emp_1sample = 0.25;
      rec.gamma_mean = 1e3 * (i + 1);
      rec.gamma_q16 = 10.0;
      rec.gamma_q84 = 1e5;
    }
    rec.flags = i == 3 ? "power_aborted;gamma_failures=2" : "";
    r.records.push_back(rec);
  }
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("maptest_unit_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, DefaultsDependOnProblem) {
  EXPECT_EQ(default_run_config(Problem::differentiation).gamma_search.omega, 1e-10);
  EXPECT_EQ(default_run_config(Problem::differentiation).sweep.sigma_floor, 1e-6);
  EXPECT_EQ(default_run_config(Problem::heat).gamma_search.omega, 1e-4);
  const RunConfig c = parse_config("run.problem = differentiation\nrun.beta = 3\n");
  EXPECT_EQ(c, default_run_config(Problem::differentiation, 3.0));
}

TEST(Config, RoundTrip) {
  RunConfig c = default_run_config(Problem::heat, 5.0);
  c.alpha = 0.05;
  c.seed = 123456789012345ull;
  c.sweep.decay = 0.8;
  c.gamma_search.omega = 1.0 / 3.0;
  c.out_dir = "results/x";
  EXPECT_EQ(parse_config(serialize(c)), c);
  EXPECT_EQ(serialize(c).find("verify."), std::string::npos);
  c.multiplier_scale = 1.5;
  EXPECT_EQ(parse_config(serialize(c)), c);
}

TEST(Config, CommentsAndWhitespace) {
  const RunConfig c = parse_config("# header\n\n  run.alpha =  0.2   # trailing\r\nsweep.m_power=7\n");
  EXPECT_EQ(c.alpha, 0.2);
  EXPECT_EQ(c.sweep.m_power, 7);
}

TEST(Config, Errors) {
  auto code = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(code("run.alpha = 0.1\nrun.alpha = 0.2\n").find("line 2"), std::string::npos);
  EXPECT_NE(code("run.alpha = 0.1\nrun.colour = red\n").find("unknown key run.colour"), std::string::npos);
  EXPECT_NE(code("run.alpha\n").find("line 1"), std::string::npos);
  EXPECT_NE(code("run.alpha = 0.1x\n").find("not a number"), std::string::npos);
  EXPECT_NE(code("sweep.decay = 1.5\n").find("sweep.decay"), std::string::npos);
  EXPECT_NE(code("run.problem = wave\n"), "no error");
  EXPECT_NE(code("run.alpha = 1\n"), "no error");
  EXPECT_THROW(load_config("/nonexistent/maptest.cfg"), Error);
}

TEST(Config, Quick) {
  RunConfig c;
  apply_quick(c);
  EXPECT_EQ(c.sweep.m_power, 200);
  EXPECT_EQ(c.sweep.m_level, 100);
  EXPECT_EQ(c.sweep.n_level, 20);
}

TEST(Csv, RoundTripWithEmptyCells) {
  const SweepResult r = sample_result();
  const std::string text = to_csv(r);
  EXPECT_EQ(text.substr(0, csv_header().size()), csv_header());
  EXPECT_EQ(parse_csv(text), r);
  EXPECT_EQ(to_csv(parse_csv(text)), text);
  EXPECT_NE(text.find(",,"), std::string::npos);
}

TEST(Csv, ShortestRoundTripFloats) {
  SweepRecord rec;
  rec.sigma = 0.1 * 3;
  rec.emp_level = 1e-300;
  const SweepRecord back = parse_csv_row(csv_row(rec));
  EXPECT_EQ(back.sigma, rec.sigma);
  EXPECT_EQ(back.emp_level, rec.emp_level);
  EXPECT_EQ(csv_row(rec).substr(0, 19), "0.30000000000000004");
}

TEST(Csv, FlagsAreSanitised) {
  SweepRecord rec;
  rec.sigma = 1.0;
  rec.flags = "a,b\nc";
  EXPECT_EQ(parse_csv_row(csv_row(rec)).flags, "a b c");
}

TEST(Csv, MalformedInput) {
  EXPECT_THROW(parse_csv_row("1,2,3"), Error);
  EXPECT_THROW(parse_csv("sigma,foo\n1,2\n"), Error);
  EXPECT_THROW(parse_csv_row("x,,,,,,,,,,,"), Error);
}

TEST(Svg, DeterministicWithOnePolylinePerColumn) {
  const SweepResult r = sample_result();
  const std::string a = render_svg(r, "deconvolution beta=1");
  EXPECT_EQ(a, render_svg(r, "deconvolution beta=1"));
  EXPECT_EQ(a.rfind("<svg", 0) == 0 || a.find("<svg") != std::string::npos, true);
  // exact_unreg, exact_oracle_map, bound_xi, emp_1sample + gamma_mean, q16, q84
  EXPECT_EQ(count(a, "<polyline"), 7u);
  EXPECT_EQ(count(render_svg(SweepResult{}, "empty"), "<polyline"), 0u);
}

TEST(SweepIo, FreshRunThenResume) {
  const Scenario scn = build_scenario([] {
    auto p = default_params(Problem::deconvolution, 1.0);
    p.n = 64;
    return p;
  }());
  RunConfig cfg = default_run_config(Problem::deconvolution, 1.0);
  cfg.scenario.n = 64;
  cfg.sweep.sigma_start = 0.1;
  cfg.sweep.sigma_floor = 0.03;
  cfg.sweep.m_power = 20;
  cfg.gamma_search.coarse_points = 21;
  cfg.out_dir = scratch("sweep_io").string();

  const SweepFiles a = run_sweep_to_files(scn, cfg, SweepKind::power);
  EXPECT_EQ(a.resumed, 0u);
  EXPECT_EQ(a.csv.filename(), "deconvolution_1_2.csv");
  EXPECT_TRUE(fs::exists(a.svg));
  EXPECT_FALSE(fs::exists(a.csv.parent_path() / "deconvolution_1_2.csv.partial"));
  EXPECT_FALSE(fs::exists(a.csv.parent_path() / "deconvolution_1_2.run"));
  const std::string full = slurp(a.csv);
  EXPECT_EQ(read_csv(a.csv), a.result);

  // Simulate an interruption: two complete rows and a truncated third.
  const std::string head = full.substr(0, full.find('\n', full.find('\n', full.find('\n') + 1) + 1) + 1);
  {
    std::ofstream(a.csv.parent_path() / "deconvolution_1_2.csv.partial", std::ios::binary) << head << "0.08,0.1";
    std::ofstream(a.csv.parent_path() / "deconvolution_1_2.run", std::ios::binary)
        << run_fingerprint(cfg, SweepKind::power);
  }
  cfg.threads = 3;  // not part of the fingerprint
  const SweepFiles b = run_sweep_to_files(scn, cfg, SweepKind::power);
  EXPECT_EQ(b.resumed, 2u);
  EXPECT_EQ(slurp(b.csv), full);

  // A stale marker from another configuration is ignored.
  {
    std::ofstream(a.csv.parent_path() / "deconvolution_1_2.csv.partial", std::ios::binary) << head;
    std::ofstream(a.csv.parent_path() / "deconvolution_1_2.run", std::ios::binary) << "kind = level\n";
  }
  const SweepFiles c = run_sweep_to_files(scn, cfg, SweepKind::power);
  EXPECT_EQ(c.resumed, 0u);
  EXPECT_EQ(slurp(c.csv), full);
  fs::remove_all(cfg.out_dir);
}

TEST(SweepIo, FingerprintIgnoresThreadsAndOutDir) {
  RunConfig a = default_run_config(Problem::heat);
  RunConfig b = a;
  b.threads = 8;
  b.out_dir = "elsewhere";
  EXPECT_EQ(run_fingerprint(a, SweepKind::level), run_fingerprint(b, SweepKind::level));
  EXPECT_NE(run_fingerprint(a, SweepKind::level), run_fingerprint(a, SweepKind::power));
  b.seed = 1;
  EXPECT_NE(run_fingerprint(a, SweepKind::level), run_fingerprint(b, SweepKind::level));
}
