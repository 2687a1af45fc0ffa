#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "maptest/scenario.hpp"
#include "maptest/simulation.hpp"

namespace maptest {

// Everything a run needs. Text form is one `section.key = value` per line,
// `#` starts a comment. Keys:
//   run.problem run.beta run.mu run.nu run.n run.alpha run.alpha1 run.seed run.threads run.out_dir
//   scenario.feature_left scenario.feature_length scenario.truth_offset_ratio scenario.delta scenario.t0
//   sweep.* and gamma_search.* mirror SweepConfig and GammaSearchConfig.
struct RunConfig {
  ScenarioParams scenario;
  double alpha = 0.1;
  double alpha1 = 0.05;
  SweepConfig sweep;
  GammaSearchConfig gamma_search;
  std::uint64_t seed = 20240901;
  unsigned threads = 1;
  std::string out_dir = "out";
  // Negative control for `verify`: scales every multiplier of the operator.
  // Not written by serialize unless it differs from 1.
  double multiplier_scale = 1.0;

  SimulationConfig simulation() const;
  bool operator==(const RunConfig&) const = default;
};

// Problem-dependent defaults: omega 1e-4 / 1e-10 / 1e-4 and sigma floor
// 1e-5 / 1e-6 / 1e-5 for deconvolution / differentiation / heat.
RunConfig default_run_config(Problem problem, double beta = 1.0);

// Defaults follow run.problem and run.beta; every other key overrides them.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize(const RunConfig& cfg);

// M_power = 200, M_level = 100, N_level = 20.
void apply_quick(RunConfig& cfg);

void validate(const RunConfig& cfg);

// Shortest round-trip decimal form.
std::string format_double(double v);
double parse_double(std::string_view s, std::string_view what);

}  // namespace maptest
