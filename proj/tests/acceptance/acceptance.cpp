// Runs every acceptance criterion and prints one line per check plus one
// verdict line per criterion. Exit status is nonzero if any criterion fails.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <map>

#include "maptest/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"maptest acceptance run"};
  maptest::VerifyOptions opts;
  std::vector<int> criteria = maptest::all_criteria();
  std::string scratch = opts.scratch_dir.string();
  app.add_option("--scratch", scratch, "scratch directory for file outputs");
  app.add_option("--seed", opts.seed, "master seed");
  app.add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--criterion", criteria, "run only these criteria")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  opts.scratch_dir = scratch;

  int failed = 0;
  for (int k : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = maptest::run_criterion(k, opts, [](const maptest::CheckResult& r) {
      std::printf("  %s\n", maptest::format_check(r).c_str());
      std::fflush(stdout);
    });
    bool pass = !results.empty();
    for (const auto& r : results) pass = pass && r.pass;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("CRITERION %d: %s (%zu checks, %.1f s)\n", k, pass ? "PASS" : "FAIL", results.size(), secs);
    std::fflush(stdout);
    failed += !pass;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
