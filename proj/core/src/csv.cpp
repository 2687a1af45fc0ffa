#include "maptest/csv.hpp"

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "maptest/config.hpp"
#include "maptest/error.hpp"

namespace maptest {

namespace {

using Column = std::optional<double> SweepRecord::*;

constexpr std::array<Column, 10> value_columns = {
    &SweepRecord::exact_unreg, &SweepRecord::exact_oracle_map, &SweepRecord::exact_apriori_map,
    &SweepRecord::bound_xi,    &SweepRecord::emp_2sample,      &SweepRecord::emp_1sample,
    &SweepRecord::emp_level,   &SweepRecord::gamma_mean,       &SweepRecord::gamma_q16,
    &SweepRecord::gamma_q84,
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

}  // namespace

const std::string& csv_header() {
  static const std::string h =
      "sigma,exact_unreg,exact_oracle_map,exact_apriori_map,bound_xi,emp_2sample,emp_1sample,emp_level,"
      "gamma_mean,gamma_q16,gamma_q84,flags";
  return h;
}

std::string csv_row(const SweepRecord& rec) {
  std::string row = format_double(rec.sigma);
  for (Column c : value_columns) {
    row += ',';
    if (rec.*c) row += format_double(*(rec.*c));
  }
  row += ',';
  for (char ch : rec.flags) row += (ch == ',' || ch == '\n' || ch == '\r') ? ' ' : ch;
  return row;
}

SweepRecord parse_csv_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto cells = split(line);
  if (cells.size() != value_columns.size() + 2)
    fail(ErrorCode::io_error, "csv row has " + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(value_columns.size() + 2));
  SweepRecord rec;
  rec.sigma = parse_double(cells[0], "sigma");
  for (std::size_t i = 0; i < value_columns.size(); ++i)
    if (!cells[i + 1].empty()) rec.*value_columns[i] = parse_double(cells[i + 1], "csv cell");
  rec.flags = std::string(cells.back());
  return rec;
}

std::string to_csv(const SweepResult& result) {
  std::string out = csv_header() + "\n";
  for (const auto& r : result.records) out += csv_row(r) + "\n";
  return out;
}

SweepResult parse_csv(std::string_view text) {
  SweepResult result;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (header) {
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line != csv_header()) fail(ErrorCode::io_error, "unexpected csv header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    result.records.push_back(parse_csv_row(line));
  }
  if (header) fail(ErrorCode::io_error, "csv is missing its header");
  return result;
}

SweepResult read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace maptest
