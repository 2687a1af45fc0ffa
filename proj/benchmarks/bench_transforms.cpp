#include <benchmark/benchmark.h>

#include "maptest/rng.hpp"
#include "maptest/scenario.hpp"

using namespace maptest;

namespace {

GridFunction noise(const Grid& g) {
  CounterRng rng(1);
  GridFunction f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = rng.normal();
  return f;
}

void BM_DeconvolutionApply(benchmark::State& state) {
  const auto op = build_deconvolution(static_cast<std::size_t>(state.range(0)));
  const GridFunction f = noise(op.grid());
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DeconvolutionApply)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_DifferentiationApply(benchmark::State& state) {
  const auto op = build_differentiation(static_cast<std::size_t>(state.range(0)));
  const GridFunction f = noise(op.grid());
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DifferentiationApply)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_Analyze(benchmark::State& state) {
  const auto op = build_deconvolution(1024);
  const GridFunction f = noise(op.grid());
  std::vector<double> out(op.size());
  for (auto _ : state) {
    op.analyze(f.values(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Analyze);

}  // namespace
