#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maptest/gamma_selection.hpp"
#include "maptest/rng.hpp"
#include "maptest/scenario.hpp"

namespace maptest {

struct SweepConfig {
  double sigma_start = 1.0;
  double decay = 0.9;
  double level_decay = 0.59049;  // 0.9^5
  double sigma_floor = 1e-5;
  int m_power = 1000;
  int m_level = 500;
  int n_level = 100;
  double power_abort = 0.99;
  double level_abort = 0.01;
  double window_factor = 10.0;

  bool operator==(const SweepConfig&) const = default;
};

void validate(const SweepConfig& cfg);

struct SimulationConfig {
  double alpha = 0.1;    // level of the exact curves and the 2-sample estimate
  double alpha1 = 0.05;  // level of the empirical 1-sample test
  GammaSearchConfig gamma_search;
  SweepConfig sweep;
  unsigned threads = 1;
};

// Run f(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots for determinism.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f);

// y = T u + sigma eps, node values of eps i.i.d. N(0, 1/h).
GridFunction sample_data(const Scenario& scn, const GridFunction& u, double sigma, CounterRng& rng);

// Coefficients of sample_data for noiseless coefficients tu (up to rounding).
void sample_data_coeffs(const Scenario& scn, std::span<const double> tu, double sigma, CounterRng& rng,
                        std::span<double> out);

struct GammaStats {
  double mean = 0.0;
  double q16 = 0.0;
  double q84 = 0.0;
};

// Linear-interpolation quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);
GammaStats gamma_stats(std::vector<double> gammas);

struct OneSampleResult {
  double power_1sample;  // rejection fraction of the 1-sample test at alpha1
  double power_2sample;  // mean closed-form power of the constructed tests at alpha
  GammaStats gamma;
  int samples;
  int failures;
};

// One pass over M_power samples; both estimators share the construction samples.
OneSampleResult empirical_power_1sample(const Scenario& scn, double sigma, const SimulationConfig& cfg,
                                        const RngPolicy& rng, std::size_t sigma_index);
double empirical_power_2sample(const Scenario& scn, double sigma, const SimulationConfig& cfg, const RngPolicy& rng,
                               std::size_t sigma_index);

// Fraction of rejections of the 1-sample test for a fixed truth (coefficients u).
double empirical_size_1sample(const Scenario& scn, std::span<const double> u_coeffs, double sigma,
                              const SimulationConfig& cfg, const RngPolicy& rng, std::size_t sigma_index,
                              std::size_t truth_index, int* failures = nullptr);

// Random hypothesis truth +-rho (T*T)^{nu/2} w, w uniform on the Euclidean unit sphere of node vectors,
// sign chosen so that the Euclidean pairing with phi is <= 0.
GridFunction level_truth(const Scenario& scn, CounterRng& rng);

struct LevelResult {
  double level;                // maximum over truths
  std::vector<double> sizes;   // per truth
  int failures;
};

LevelResult empirical_level(const Scenario& scn, double sigma, const SimulationConfig& cfg, const RngPolicy& rng,
                            std::size_t sigma_index);

struct ExactCurves {
  double unregularized;
  double oracle_map;
  double apriori_map;
  double bound_xi;
  double oracle_gamma;
  double apriori_gamma;
};

ExactCurves exact_curves(const Scenario& scn, double sigma, const SimulationConfig& cfg);

enum class SweepKind { power, level, gamma };

const char* to_string(SweepKind k);

struct SweepRecord {
  double sigma = 0.0;
  std::optional<double> exact_unreg;
  std::optional<double> exact_oracle_map;
  std::optional<double> exact_apriori_map;
  std::optional<double> bound_xi;
  std::optional<double> emp_2sample;
  std::optional<double> emp_1sample;
  std::optional<double> emp_level;
  std::optional<double> gamma_mean;
  std::optional<double> gamma_q16;
  std::optional<double> gamma_q84;
  std::string flags;

  bool operator==(const SweepRecord&) const = default;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  bool operator==(const SweepResult&) const = default;
};

// sigma_i = sigma_start * decay^i down to sigma_floor (decay = level_decay for level sweeps).
std::vector<double> sigma_grid(const SweepConfig& cfg, SweepKind kind);

// True once every value in the trailing window spanning window_factor in sigma
// satisfies pred, and the sweep already covers a full window.
bool window_satisfied(std::span<const double> sigmas, std::span<const std::optional<double>> values,
                      double window_factor, const std::function<bool(double)>& pred);

// Iterate the sigma grid. `completed` holds records from an interrupted run with
// the same configuration; `on_record` is called after each new sigma-point.
SweepResult run_sweep(const Scenario& scn, const SimulationConfig& cfg, const RngPolicy& rng, SweepKind kind,
                      const std::vector<SweepRecord>& completed = {},
                      const std::function<void(const SweepRecord&)>& on_record = {});

}  // namespace maptest
