#include <benchmark/benchmark.h>

#include "maptest/gamma_selection.hpp"
#include "maptest/simulation.hpp"

using namespace maptest;

namespace {

const Scenario& deconv() {
  static const Scenario s = build_scenario(default_params(Problem::deconvolution, 1.0));
  return s;
}

void BM_APosterioriGamma(benchmark::State& state) {
  const Scenario& s = deconv();
  const double sigma = 0.01;
  const ProbeFamily fam(s, s.mu, sigma);
  CounterRng rng = RngPolicy{1}.stream(StreamTask::test_fixture, 0, 0);
  std::vector<double> y(s.op.size());
  sample_data_coeffs(s, fam.clean_data(), sigma, rng, y);
  GammaSearchConfig cfg;
  cfg.omega = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(a_posteriori_gamma(fam, y, cfg));
}
BENCHMARK(BM_APosterioriGamma)->Unit(benchmark::kMicrosecond);

void BM_OneSamplePower(benchmark::State& state) {
  const Scenario& s = deconv();
  SimulationConfig cfg;
  cfg.gamma_search.omega = 1e-4;
  cfg.sweep.m_power = 200;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_power_1sample(s, 0.05, cfg, RngPolicy{2}, 0));
}
BENCHMARK(BM_OneSamplePower)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
