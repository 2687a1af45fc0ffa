#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace maptest {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator: the i-th output is splitmix64(key + i * golden).
// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  double uniform();  // in [0, 1)
  double normal();   // standard normal

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

enum class StreamTask : std::uint64_t {
  power_data = 1,
  level_truth = 2,
  level_data = 3,
  test_fixture = 99,
};

// One independent stream per (task, sigma index, sample index); identical
// inputs give identical streams regardless of execution order.
struct RngPolicy {
  std::uint64_t master_seed = 20240901;

  CounterRng stream(StreamTask task, std::uint64_t sigma_index, std::uint64_t sample_index) const;
};

}  // namespace maptest
