#pragma once

#include <filesystem>
#include <string>

#include "maptest/config.hpp"
#include "maptest/scenario.hpp"
#include "maptest/simulation.hpp"

namespace maptest {

// <problem>_<beta>_<mu>
std::string output_stem(const RunConfig& cfg);

struct SweepFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
  SweepResult result;
  std::size_t resumed = 0;  // rows taken over from an interrupted run
};

// Runs one sweep into <out_dir>/<kind>/<stem>.csv and .svg. Rows are flushed to
// <stem>.csv.partial as they finish; a matching <stem>.run fingerprint lets an
// interrupted run resume where it stopped. Thread count and out_dir are not part
// of the fingerprint since they do not change the output.
SweepFiles run_sweep_to_files(const Scenario& scn, const RunConfig& cfg, SweepKind kind);

// Text identifying the computation; equal fingerprints give equal rows.
std::string run_fingerprint(const RunConfig& cfg, SweepKind kind);

}  // namespace maptest
