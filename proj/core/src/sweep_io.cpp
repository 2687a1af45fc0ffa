#include "maptest/sweep_io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "maptest/csv.hpp"
#include "maptest/error.hpp"
#include "maptest/svg.hpp"

namespace maptest {

namespace fs = std::filesystem;

std::string output_stem(const RunConfig& cfg) {
  return std::string(to_string(cfg.scenario.problem)) + "_" + format_double(cfg.scenario.beta) + "_" +
         format_double(cfg.scenario.mu);
}

std::string run_fingerprint(const RunConfig& cfg, SweepKind kind) {
  RunConfig c = cfg;
  c.threads = 1;
  c.out_dir = ".";
  return std::string("kind = ") + to_string(kind) + "\n" + serialize(c);
}

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(ErrorCode::io_error, "cannot write " + p.string());
}

// Complete rows of a partial file; a trailing line without newline was cut off mid-write.
std::vector<SweepRecord> read_partial(const fs::path& p) {
  std::string text = slurp(p);
  const auto last_nl = text.rfind('\n');
  text.resize(last_nl == std::string::npos ? 0 : last_nl + 1);
  if (text.empty()) return {};
  return parse_csv(text).records;
}

}  // namespace

SweepFiles run_sweep_to_files(const Scenario& scn, const RunConfig& cfg, SweepKind kind) {
  const fs::path dir = fs::path(cfg.out_dir) / to_string(kind);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());

  const std::string stem = output_stem(cfg);
  SweepFiles files;
  files.csv = dir / (stem + ".csv");
  files.svg = dir / (stem + ".svg");
  const fs::path partial = dir / (stem + ".csv.partial");
  const fs::path marker = dir / (stem + ".run");
  const std::string fingerprint = run_fingerprint(cfg, kind);

  std::vector<SweepRecord> completed;
  if (fs::exists(partial) && fs::exists(marker) && slurp(marker) == fingerprint) {
    try {
      completed = read_partial(partial);
    } catch (const Error&) {
      completed.clear();
    }
  }
  files.resumed = completed.size();

  write_file(marker, fingerprint);
  {
    SweepResult head;
    head.records = completed;
    write_file(partial, to_csv(head));
  }
  std::ofstream out(partial, std::ios::binary | std::ios::app);
  if (!out) fail(ErrorCode::io_error, "cannot append to " + partial.string());

  const RngPolicy policy{cfg.seed};
  files.result = run_sweep(scn, cfg.simulation(), policy, kind, completed, [&](const SweepRecord& rec) {
    out << csv_row(rec) << '\n';
    out.flush();
    if (!out) fail(ErrorCode::io_error, "cannot append to " + partial.string());
  });
  out.close();

  fs::rename(partial, files.csv, ec);
  if (ec) fail(ErrorCode::io_error, "cannot rename " + partial.string() + ": " + ec.message());
  fs::remove(marker, ec);
  write_file(files.svg, render_svg(files.result, std::string(to_string(kind)) + ": " + stem));
  return files;
}

}  // namespace maptest
