#include "maptest/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "maptest/error.hpp"

namespace maptest {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    fail(ErrorCode::config_error, std::string(what) + ": not a number: '" + std::string(s) + "'");
  return v;
}

namespace {

template <class Int>
Int parse_int(std::string_view s, std::string_view what) {
  Int v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    fail(ErrorCode::config_error, std::string(what) + ": not an integer: '" + std::string(s) + "'");
  return v;
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

Field real(const char* key, double RunConfig::*m) {
  return {key, [m](const RunConfig& c) { return format_double(c.*m); },
          [m, key](RunConfig& c, std::string_view v) { c.*m = parse_double(v, key); }};
}

template <class S>
Field real(const char* key, S RunConfig::*s, double S::*m) {
  return {key, [s, m](const RunConfig& c) { return format_double(c.*s.*m); },
          [s, m, key](RunConfig& c, std::string_view v) { c.*s.*m = parse_double(v, key); }};
}

template <class S, class Int>
Field integer(const char* key, S RunConfig::*s, Int S::*m) {
  return {key, [s, m](const RunConfig& c) { return std::to_string(c.*s.*m); },
          [s, m, key](RunConfig& c, std::string_view v) { c.*s.*m = parse_int<Int>(v, key); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"run.problem", [](const RunConfig& c) { return std::string(to_string(c.scenario.problem)); },
       [](RunConfig& c, std::string_view v) { c.scenario.problem = parse_problem(std::string(v)); }},
      real("run.beta", &RunConfig::scenario, &ScenarioParams::beta),
      real("run.mu", &RunConfig::scenario, &ScenarioParams::mu),
      real("run.nu", &RunConfig::scenario, &ScenarioParams::nu),
      integer("run.n", &RunConfig::scenario, &ScenarioParams::n),
      real("run.alpha", &RunConfig::alpha),
      real("run.alpha1", &RunConfig::alpha1),
      {"run.seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>(v, "run.seed"); }},
      {"run.threads", [](const RunConfig& c) { return std::to_string(c.threads); },
       [](RunConfig& c, std::string_view v) { c.threads = parse_int<unsigned>(v, "run.threads"); }},
      {"run.out_dir", [](const RunConfig& c) { return c.out_dir; },
       [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); }},
      real("scenario.feature_left", &RunConfig::scenario, &ScenarioParams::feature_left),
      real("scenario.feature_length", &RunConfig::scenario, &ScenarioParams::feature_length),
      real("scenario.truth_offset_ratio", &RunConfig::scenario, &ScenarioParams::truth_offset_ratio),
      real("scenario.delta", &RunConfig::scenario, &ScenarioParams::delta),
      real("scenario.t0", &RunConfig::scenario, &ScenarioParams::t0),
      real("sweep.sigma_start", &RunConfig::sweep, &SweepConfig::sigma_start),
      real("sweep.decay", &RunConfig::sweep, &SweepConfig::decay),
      real("sweep.level_decay", &RunConfig::sweep, &SweepConfig::level_decay),
      real("sweep.sigma_floor", &RunConfig::sweep, &SweepConfig::sigma_floor),
      integer("sweep.m_power", &RunConfig::sweep, &SweepConfig::m_power),
      integer("sweep.m_level", &RunConfig::sweep, &SweepConfig::m_level),
      integer("sweep.n_level", &RunConfig::sweep, &SweepConfig::n_level),
      real("sweep.power_abort", &RunConfig::sweep, &SweepConfig::power_abort),
      real("sweep.level_abort", &RunConfig::sweep, &SweepConfig::level_abort),
      real("sweep.window_factor", &RunConfig::sweep, &SweepConfig::window_factor),
      real("gamma_search.log10_min", &RunConfig::gamma_search, &GammaSearchConfig::log10_min),
      real("gamma_search.log10_max", &RunConfig::gamma_search, &GammaSearchConfig::log10_max),
      integer("gamma_search.coarse_points", &RunConfig::gamma_search, &GammaSearchConfig::coarse_points),
      real("gamma_search.refine_tol", &RunConfig::gamma_search, &GammaSearchConfig::refine_tol),
      real("gamma_search.omega", &RunConfig::gamma_search, &GammaSearchConfig::omega),
  };
  return f;
}

constexpr const char* tamper_key = "verify.multiplier_scale";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SimulationConfig RunConfig::simulation() const {
  SimulationConfig s;
  s.alpha = alpha;
  s.alpha1 = alpha1;
  s.gamma_search = gamma_search;
  s.sweep = sweep;
  s.threads = threads;
  return s;
}

RunConfig default_run_config(Problem problem, double beta) {
  RunConfig c;
  c.scenario = default_params(problem, beta);
  switch (problem) {
    case Problem::differentiation:
      c.gamma_search.omega = 1e-10;
      c.sweep.sigma_floor = 1e-6;
      break;
    default:
      c.gamma_search.omega = 1e-4;
      c.sweep.sigma_floor = 1e-5;
      break;
  }
  return c;
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::config_error, "line " + std::to_string(line_no) + ": expected 'section.key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (kv.count(key)) fail(ErrorCode::config_error, "line " + std::to_string(line_no) + ": duplicate key " + key);
    kv[key] = {value, line_no};
  }

  Problem problem = Problem::deconvolution;
  double beta = 1.0;
  if (auto it = kv.find("run.problem"); it != kv.end()) problem = parse_problem(it->second.first);
  if (auto it = kv.find("run.beta"); it != kv.end()) beta = parse_double(it->second.first, "run.beta");
  RunConfig cfg = default_run_config(problem, beta);

  for (const auto& [key, entry] : kv) {
    if (key == tamper_key) {
      cfg.multiplier_scale = parse_double(entry.first, key);
      continue;
    }
    bool known = false;
    for (const Field& f : fields())
      if (key == f.key) {
        f.set(cfg, entry.first);
        known = true;
        break;
      }
    if (!known) fail(ErrorCode::config_error, "line " + std::to_string(entry.second) + ": unknown key " + key);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const RunConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  if (cfg.multiplier_scale != 1.0) out += std::string(tamper_key) + " = " + format_double(cfg.multiplier_scale) + "\n";
  return out;
}

void apply_quick(RunConfig& cfg) {
  cfg.sweep.m_power = 200;
  cfg.sweep.m_level = 100;
  cfg.sweep.n_level = 20;
}

void validate(const RunConfig& cfg) {
  if (cfg.scenario.problem == Problem::custom) fail(ErrorCode::config_error, "run.problem must be a shipped problem");
  if (cfg.scenario.n < 2) fail(ErrorCode::config_error, "run.n must be >= 2");
  if (!(cfg.scenario.beta > 0.0)) fail(ErrorCode::config_error, "run.beta must be positive");
  if (!(cfg.scenario.mu > 0.0)) fail(ErrorCode::config_error, "run.mu must be positive");
  if (!(cfg.scenario.nu > 0.0)) fail(ErrorCode::config_error, "run.nu must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail(ErrorCode::config_error, "run.alpha must lie in (0,1)");
  if (!(cfg.alpha1 > 0.0 && cfg.alpha1 < 1.0)) fail(ErrorCode::config_error, "run.alpha1 must lie in (0,1)");
  if (cfg.threads < 1) fail(ErrorCode::config_error, "run.threads must be >= 1");
  if (cfg.out_dir.empty()) fail(ErrorCode::config_error, "run.out_dir must not be empty");
  if (!(cfg.scenario.feature_length > 0.0)) fail(ErrorCode::config_error, "scenario.feature_length must be positive");
  if (!(cfg.scenario.t0 > 0.0)) fail(ErrorCode::config_error, "scenario.t0 must be positive");
  if (!(cfg.multiplier_scale > 0.0)) fail(ErrorCode::config_error, "verify.multiplier_scale must be positive");
  validate(cfg.sweep);
  validate(cfg.gamma_search);
}

}  // namespace maptest
