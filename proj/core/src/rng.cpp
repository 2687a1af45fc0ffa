#include "maptest/rng.hpp"

namespace maptest {

namespace {
constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += golden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::result_type CounterRng::operator()() { return splitmix64(key_ + (counter_++) * golden); }

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::normal() { return normal_(*this); }

CounterRng RngPolicy::stream(StreamTask task, std::uint64_t sigma_index, std::uint64_t sample_index) const {
  std::uint64_t k = splitmix64(master_seed);
  k = splitmix64(k ^ static_cast<std::uint64_t>(task));
  k = splitmix64(k ^ sigma_index);
  k = splitmix64(k ^ sample_index);
  return CounterRng(k);
}

}  // namespace maptest
