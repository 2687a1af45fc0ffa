#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace maptest {

// How measured is compared with target.
enum class Compare {
  relative,  // |m - t| <= tol |t|
  absolute,  // |m - t| <= tol
  at_most,   // m <= t + tol
  at_least,  // m >= t - tol
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tol = 0.0;
  Compare compare = Compare::absolute;
  bool pass = false;
  std::string detail;
};

CheckResult make_check(int criterion, std::string name, double measured, double target, double tol, Compare compare,
                       std::string detail = {});

// "PASS [1] name  measured=... target=... tol=... (detail)"
std::string format_check(const CheckResult& r);

struct VerifyOptions {
  std::uint64_t seed = 20240901;
  unsigned threads = 1;
  // Multiplies every operator multiplier before the norm checks (negative control).
  double multiplier_scale = 1.0;
  // Scratch space for the file-based determinism run.
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path() / "maptest_verify";
};

// Criteria 1-5 and 8 run in seconds to minutes; 6, 7 and 9 run Monte Carlo sweeps.
bool is_fast_criterion(int criterion);
std::vector<int> all_criteria();

using CheckSink = std::function<void(const CheckResult&)>;

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& opts, const CheckSink& sink = {});
std::vector<CheckResult> run_verification(const std::vector<int>& criteria, const VerifyOptions& opts,
                                          const CheckSink& sink = {});

}  // namespace maptest
