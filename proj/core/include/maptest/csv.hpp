#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "maptest/simulation.hpp"

namespace maptest {

// sigma,exact_unreg,exact_oracle_map,exact_apriori_map,bound_xi,emp_2sample,emp_1sample,emp_level,
// gamma_mean,gamma_q16,gamma_q84,flags
const std::string& csv_header();

// One row without the trailing newline. Missing values are empty cells.
std::string csv_row(const SweepRecord& rec);
SweepRecord parse_csv_row(std::string_view line);

std::string to_csv(const SweepResult& result);
SweepResult parse_csv(std::string_view text);
SweepResult read_csv(const std::filesystem::path& path);

}  // namespace maptest
