#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "maptest/config.hpp"
#include "maptest/csv.hpp"
#include "maptest/error.hpp"
#include "maptest/map_test.hpp"
#include "maptest/scenario.hpp"
#include "maptest/svg.hpp"
#include "maptest/sweep_io.hpp"
#include "maptest/verify.hpp"

namespace fs = std::filesystem;
using namespace maptest;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool quick = false;
  std::string out;
  std::optional<unsigned> threads;
  std::string problem;
  std::optional<double> beta;
  std::optional<double> mu;
};

// Without a config file, --problem and --beta select that problem's defaults.
// With one, command-line values override single fields of the file.
RunConfig resolve(const GlobalOptions& g) {
  RunConfig cfg;
  if (g.config.empty()) {
    const Problem p = g.problem.empty() ? Problem::deconvolution : parse_problem(g.problem);
    cfg = default_run_config(p, g.beta.value_or(1.0));
  } else {
    cfg = load_config(g.config);
    if (!g.problem.empty()) cfg.scenario.problem = parse_problem(g.problem);
    if (g.beta) cfg.scenario.beta = *g.beta;
  }
  if (g.mu) cfg.scenario.mu = *g.mu;
  if (g.seed) cfg.seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  if (!g.out.empty()) cfg.out_dir = g.out;
  if (g.quick) apply_quick(cfg);
  validate(cfg);
  return cfg;
}

int cmd_scenario(const RunConfig& cfg) {
  const Scenario scn = build_scenario(cfg.scenario);
  const auto ev = eigenvector_diagnostic(scn, PriorSpec::power_law(1.0, scn.mu), scn.phi);
  const Grid& g = scn.grid();
  std::string report;
  auto line = [&](const std::string& k, const std::string& v) { report += k + " = " + v + "\n"; };
  line("problem", to_string(scn.name));
  line("beta", format_double(scn.beta));
  line("mu", format_double(scn.mu));
  line("nu", format_double(scn.nu));
  line("grid.a", format_double(g.a()));
  line("grid.b", format_double(g.b()));
  line("grid.n", std::to_string(g.size()));
  line("grid.h", format_double(g.spacing()));
  line("grid.rule", g.rule() == NodeRule::periodic ? "periodic" : "interior");
  line("basis", to_string(scn.op.basis()));
  line("operator_norm", format_double(scn.op.operator_norm()));
  line("norm_factor", format_double(scn.op.norm_factor()));
  line("rho", format_double(scn.rho));
  line("phi_norm", format_double(norm(scn.phi)));
  line("feature", format_double(inner(scn.phi, scn.u_dagger)));
  line("log_norm_phi0", format_double(log_norm_unregularized_probe(scn)));
  line("eigenvector", ev ? "yes, gamma_hat = " + format_double(*ev) : "no");
  std::cout << report;

  const fs::path dir = fs::path(cfg.out_dir) / "scenario";
  fs::create_directories(dir);
  const fs::path file = dir / (output_stem(cfg) + ".txt");
  std::ofstream(file, std::ios::binary) << report;
  std::cerr << "wrote " << file.string() << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, SweepKind kind) {
  const Scenario scn = build_scenario(cfg.scenario);
  std::cerr << to_string(kind) << " sweep: " << output_stem(cfg) << ", seed " << cfg.seed << ", "
            << sigma_grid(cfg.sweep, kind).size() << " sigma points\n";
  const SweepFiles files = run_sweep_to_files(scn, cfg, kind);
  if (files.resumed > 0) std::cerr << "resumed after " << files.resumed << " rows\n";
  std::cout << files.csv.string() << "\n" << files.svg.string() << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, bool all, const std::vector<int>& only) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  opts.multiplier_scale = cfg.multiplier_scale;
  opts.scratch_dir = fs::path(cfg.out_dir) / "verify_scratch";
  std::vector<int> criteria = only;
  if (criteria.empty())
    for (int k : all_criteria())
      if (all || is_fast_criterion(k)) criteria.push_back(k);
  int failed = 0;
  run_verification(criteria, opts, [&](const CheckResult& r) {
    std::cout << format_check(r) << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_plot(const std::string& csv, const std::string& output) {
  const SweepResult r = read_csv(csv);
  fs::path svg = output.empty() ? fs::path(csv).replace_extension(".svg") : fs::path(output);
  std::ofstream out(svg, std::ios::binary);
  out << render_svg(r, fs::path(csv).stem().string());
  if (!out) fail(ErrorCode::io_error, "cannot write " + svg.string());
  std::cout << svg.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP hypothesis tests for linear inverse problems"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed");
  app.add_flag("--quick", g.quick, "M_power=200, M_level=100, N_level=20");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--problem", g.problem, "deconvolution, differentiation or heat");
  app.add_option("--beta", g.beta, "feature shape");
  app.add_option("--mu", g.mu, "prior exponent");

  auto* scenario = app.add_subcommand("scenario", "print scenario constants");
  auto* power = app.add_subcommand("power", "power sweep");
  auto* level = app.add_subcommand("level", "level sweep");
  auto* gamma = app.add_subcommand("gamma", "gamma statistics sweep");
  auto* verify = app.add_subcommand("verify", "acceptance checks");
  bool verify_all = false;
  std::vector<int> criteria;
  verify->add_flag("--all", verify_all, "include the Monte Carlo sweeps (6, 7, 9)");
  verify->add_option("--criterion", criteria, "run only these criteria")->check(CLI::Range(1, 9));
  auto* print_config = app.add_subcommand("config", "print the resolved configuration");
  auto* plot = app.add_subcommand("plot", "render a CSV as SVG");
  std::string plot_csv, plot_out;
  plot->add_option("csv", plot_csv, "sweep CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--output", plot_out, "SVG path (default: next to the CSV)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) return cmd_plot(plot_csv, plot_out);
    const RunConfig cfg = resolve(g);
    if (print_config->parsed()) {
      std::cout << serialize(cfg);
      return 0;
    }
    if (scenario->parsed()) return cmd_scenario(cfg);
    if (power->parsed()) return cmd_sweep(cfg, SweepKind::power);
    if (level->parsed()) return cmd_sweep(cfg, SweepKind::level);
    if (gamma->parsed()) return cmd_sweep(cfg, SweepKind::gamma);
    if (verify->parsed()) return cmd_verify(cfg, verify_all, criteria);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::config_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
