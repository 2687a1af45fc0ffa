#include "maptest/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "maptest/error.hpp"
#include "maptest/map_test.hpp"
#include "maptest/normal.hpp"

namespace maptest {

void validate(const SweepConfig& c) {
  if (!(c.sigma_start > 0.0)) fail(ErrorCode::config_error, "sweep.sigma_start must be positive");
  if (!(c.decay > 0.0 && c.decay < 1.0)) fail(ErrorCode::config_error, "sweep.decay must lie in (0,1)");
  if (!(c.level_decay > 0.0 && c.level_decay < 1.0))
    fail(ErrorCode::config_error, "sweep.level_decay must lie in (0,1)");
  if (!(c.sigma_floor > 0.0)) fail(ErrorCode::config_error, "sweep.sigma_floor must be positive");
  if (c.m_power < 1 || c.m_level < 1 || c.n_level < 1)
    fail(ErrorCode::config_error, "sweep.m_power, sweep.m_level and sweep.n_level must be >= 1");
  if (!(c.power_abort > 0.0 && c.power_abort < 1.0)) fail(ErrorCode::config_error, "sweep.power_abort must lie in (0,1)");
  if (!(c.level_abort > 0.0 && c.level_abort < 1.0)) fail(ErrorCode::config_error, "sweep.level_abort must lie in (0,1)");
  if (!(c.window_factor > 1.0)) fail(ErrorCode::config_error, "sweep.window_factor must exceed 1");
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::vector<double> node_noise(std::size_t n, double h, CounterRng& rng) {
  std::vector<double> e(n);
  const double s = 1.0 / std::sqrt(h);
  for (double& v : e) v = s * rng.normal();
  return e;
}

}  // namespace

GridFunction sample_data(const Scenario& scn, const GridFunction& u, double sigma, CounterRng& rng) {
  if (!(sigma >= 0.0)) fail(ErrorCode::invalid_argument, "sigma must be >= 0");
  GridFunction y = scn.op.apply(u);
  const auto e = node_noise(y.size(), scn.grid().spacing(), rng);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += sigma * e[j];
  return y;
}

void sample_data_coeffs(const Scenario& scn, std::span<const double> tu, double sigma, CounterRng& rng,
                        std::span<double> out) {
  const std::size_t n = scn.op.size();
  if (tu.size() != n || out.size() != n) fail(ErrorCode::dimension_mismatch, "sample_data_coeffs: wrong length");
  const auto e = node_noise(n, scn.grid().spacing(), rng);
  scn.op.analyze(e, out);
  for (std::size_t k = 0; k < n; ++k) out[k] = tu[k] + sigma * out[k];
}

double quantile_sorted(std::span<const double> s, double p) {
  if (s.empty()) fail(ErrorCode::invalid_argument, "quantile of an empty sample");
  const double h = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= s.size()) return s.back();
  return s[lo] + (h - static_cast<double>(lo)) * (s[lo + 1] - s[lo]);
}

GammaStats gamma_stats(std::vector<double> g) {
  if (g.empty()) fail(ErrorCode::invalid_argument, "no gamma values");
  std::sort(g.begin(), g.end());
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  return GammaStats{mean, quantile_sorted(g, 0.16), quantile_sorted(g, 0.84)};
}

namespace {

void check_failures(int failures, int samples, const char* what) {
  if (static_cast<double>(failures) > 0.01 * samples)
    fail(ErrorCode::search_failed, std::string(what) + ": " + std::to_string(failures) + " of " +
                                       std::to_string(samples) + " gamma searches failed");
}

struct SampleOutcome {
  bool ok = false;
  bool reject = false;
  double gamma = 0.0;
  double power2 = 0.0;
};

}  // namespace

OneSampleResult empirical_power_1sample(const Scenario& scn, double sigma, const SimulationConfig& cfg,
                                        const RngPolicy& policy, std::size_t sigma_index) {
  const ProbeFamily family(scn, scn.mu, sigma);
  const double z1 = normal_quantile(1.0 - cfg.alpha1);
  const double za = normal_quantile(cfg.alpha);
  const int m = cfg.sweep.m_power;
  std::vector<SampleOutcome> out(static_cast<std::size_t>(m));
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    CounterRng rng = policy.stream(StreamTask::power_data, sigma_index, i);
    std::vector<double> y(scn.op.size());
    sample_data_coeffs(scn, family.clean_data(), sigma, rng, y);
    SampleOutcome& o = out[i];
    try {
      const GammaChoice g = a_posteriori_gamma(family, y, cfg.gamma_search);
      const auto t = family.terms(g.gamma, y);
      o.reject = t.pairing > sigma * t.probe_norm * z1 + t.residual_vprime;
      o.power2 = normal_cdf(za - family.j_true(g.gamma) / sigma);
      o.gamma = g.gamma;
      o.ok = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::search_failed) throw;
    }
  });
  OneSampleResult r{0.0, 0.0, {}, 0, 0};
  std::vector<double> gammas;
  int rejects = 0;
  double p2 = 0.0;
  for (const auto& o : out) {
    if (!o.ok) {
      ++r.failures;
      continue;
    }
    ++r.samples;
    rejects += o.reject ? 1 : 0;
    p2 += o.power2;
    gammas.push_back(o.gamma);
  }
  check_failures(r.failures, m, "1-sample power");
  r.power_1sample = static_cast<double>(rejects) / r.samples;
  r.power_2sample = p2 / r.samples;
  r.gamma = gamma_stats(std::move(gammas));
  return r;
}

double empirical_power_2sample(const Scenario& scn, double sigma, const SimulationConfig& cfg,
                               const RngPolicy& policy, std::size_t sigma_index) {
  return empirical_power_1sample(scn, sigma, cfg, policy, sigma_index).power_2sample;
}

GridFunction level_truth(const Scenario& scn, CounterRng& rng) {
  const std::size_t n = scn.op.size();
  GridFunction w(scn.grid());
  for (std::size_t j = 0; j < n; ++j) w[j] = rng.normal();
  const double len = euclidean_norm(w.values());
  w *= 1.0 / len;
  GridFunction u = scn.op.tstar_t_power(0.5 * scn.nu, w);
  u *= scn.rho;
  double pairing = 0.0;
  for (std::size_t j = 0; j < n; ++j) pairing += scn.phi[j] * u[j];
  if (pairing > 0.0) u *= -1.0;
  return u;
}

namespace {

bool one_sample_reject(const ProbeFamily& family, std::span<const double> y, double sigma, double z1,
                       const GammaSearchConfig& gs) {
  const GammaChoice g = a_posteriori_gamma(family, y, gs);
  const auto t = family.terms(g.gamma, y);
  return t.pairing > sigma * t.probe_norm * z1 + t.residual_vprime;
}

}  // namespace

double empirical_size_1sample(const Scenario& scn, std::span<const double> u_coeffs, double sigma,
                              const SimulationConfig& cfg, const RngPolicy& policy, std::size_t sigma_index,
                              std::size_t truth_index, int* failures) {
  const ProbeFamily family(scn, scn.mu, sigma);
  const double z1 = normal_quantile(1.0 - cfg.alpha1);
  const auto tau = scn.op.singular_values();
  std::vector<double> tu(u_coeffs.size());
  for (std::size_t k = 0; k < tu.size(); ++k) tu[k] = tau[k] * u_coeffs[k];
  const int m = cfg.sweep.m_level;
  std::vector<signed char> dec(static_cast<std::size_t>(m), -1);
  parallel_for(dec.size(), cfg.threads, [&](std::size_t i) {
    CounterRng rng =
        policy.stream(StreamTask::level_data, sigma_index, truth_index * static_cast<std::size_t>(m) + i);
    std::vector<double> y(tu.size());
    sample_data_coeffs(scn, tu, sigma, rng, y);
    try {
      dec[i] = one_sample_reject(family, y, sigma, z1, cfg.gamma_search) ? 1 : 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::search_failed) throw;
    }
  });
  int rej = 0, ok = 0, bad = 0;
  for (signed char d : dec) {
    if (d < 0) {
      ++bad;
      continue;
    }
    ++ok;
    rej += d;
  }
  if (failures) *failures = bad;
  check_failures(bad, m, "empirical size");
  return static_cast<double>(rej) / ok;
}

LevelResult empirical_level(const Scenario& scn, double sigma, const SimulationConfig& cfg, const RngPolicy& policy,
                            std::size_t sigma_index) {
  const std::size_t nt = static_cast<std::size_t>(cfg.sweep.n_level);
  const std::size_t m = static_cast<std::size_t>(cfg.sweep.m_level);
  const ProbeFamily family(scn, scn.mu, sigma);
  const double z1 = normal_quantile(1.0 - cfg.alpha1);
  const auto tau = scn.op.singular_values();

  std::vector<std::vector<double>> tus(nt);
  parallel_for(nt, cfg.threads, [&](std::size_t t) {
    CounterRng rng = policy.stream(StreamTask::level_truth, sigma_index, t);
    auto uc = scn.op.analyze(level_truth(scn, rng));
    for (std::size_t k = 0; k < uc.size(); ++k) uc[k] *= tau[k];
    tus[t] = std::move(uc);
  });

  std::vector<signed char> dec(nt * m, -1);
  parallel_for(dec.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t t = i / m;
    CounterRng rng = policy.stream(StreamTask::level_data, sigma_index, i);
    std::vector<double> y(tau.size());
    sample_data_coeffs(scn, tus[t], sigma, rng, y);
    try {
      dec[i] = one_sample_reject(family, y, sigma, z1, cfg.gamma_search) ? 1 : 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::search_failed) throw;
    }
  });

  LevelResult r{0.0, std::vector<double>(nt, 0.0), 0};
  for (std::size_t t = 0; t < nt; ++t) {
    int rej = 0, ok = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const signed char d = dec[t * m + i];
      if (d < 0) {
        ++r.failures;
        continue;
      }
      ++ok;
      rej += d;
    }
    r.sizes[t] = ok > 0 ? static_cast<double>(rej) / ok : 0.0;
    r.level = std::max(r.level, r.sizes[t]);
  }
  check_failures(r.failures, static_cast<int>(nt * m), "empirical level");
  return r;
}

ExactCurves exact_curves(const Scenario& scn, double sigma, const SimulationConfig& cfg) {
  const ProbeFamily family(scn, scn.mu, sigma);
  const double za = normal_quantile(cfg.alpha);
  auto power_at = [&](double gamma) { return normal_cdf(za - family.j_true(gamma) / sigma); };

  ExactCurves c{};
  c.unregularized = exact_power_unregularized(scn, sigma, cfg.alpha, scn.u_coeffs);
  GammaSearchConfig gs = cfg.gamma_search;
  gs.omega = 0.0;
  c.oracle_gamma = oracle_gamma(family, gs).gamma;
  c.oracle_map = power_at(c.oracle_gamma);

  double pu = 0.0;
  for (std::size_t k = 0; k < scn.phi_coeffs.size(); ++k) pu += scn.phi_coeffs[k] * scn.u_coeffs[k];
  const double xi = pu / euclidean_norm(scn.phi_coeffs);
  c.apriori_gamma = a_priori_gamma(xi, scn.rho, scn.nu, scn.mu, sigma);
  c.apriori_map = power_at(c.apriori_gamma);
  BoundParams bp{xi, c.apriori_gamma / sigma, scn.nu, scn.mu, scn.rho, sigma, cfg.alpha};
  c.bound_xi = power_lower_bound_xi(bp, xi);
  return c;
}

const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::power: return "power";
    case SweepKind::level: return "level";
    case SweepKind::gamma: return "gamma";
  }
  return "unknown";
}

std::vector<double> sigma_grid(const SweepConfig& cfg, SweepKind kind) {
  validate(cfg);
  const double decay = kind == SweepKind::level ? cfg.level_decay : cfg.decay;
  std::vector<double> s;
  for (int i = 0;; ++i) {
    const double v = cfg.sigma_start * std::pow(decay, i);
    if (v < cfg.sigma_floor * (1.0 - 1e-9)) break;
    s.push_back(v);
  }
  return s;
}

bool window_satisfied(std::span<const double> sigmas, std::span<const std::optional<double>> values,
                      double window_factor, const std::function<bool(double)>& pred) {
  if (sigmas.empty() || sigmas.size() != values.size()) return false;
  const std::size_t last = sigmas.size() - 1;
  const double edge = window_factor * sigmas[last];
  if (sigmas.front() < edge * (1.0 - 1e-12)) return false;
  for (std::size_t j = last + 1; j-- > 0;) {
    if (sigmas[j] > edge * (1.0 + 1e-12)) break;
    if (!values[j] || !pred(*values[j])) return false;
  }
  return true;
}

namespace {

void append_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += ';';
  flags += f;
}

std::string error_flag(const char* prefix, const std::exception& e) {
  std::string msg = e.what();
  for (char& ch : msg)
    if (ch == ',' || ch == ';' || ch == '"' || ch == '\n' || ch == '\r') ch = ' ';
  return std::string(prefix) + ":" + msg;
}

}  // namespace

SweepResult run_sweep(const Scenario& scn, const SimulationConfig& cfg, const RngPolicy& policy, SweepKind kind,
                      const std::vector<SweepRecord>& completed,
                      const std::function<void(const SweepRecord&)>& on_record) {
  validate(cfg.gamma_search);
  const auto grid = sigma_grid(cfg.sweep, kind);
  if (completed.size() > grid.size()) fail(ErrorCode::invalid_argument, "resume data longer than the sigma grid");
  for (std::size_t i = 0; i < completed.size(); ++i)
    if (std::abs(completed[i].sigma - grid[i]) > 1e-12 * grid[i])
      fail(ErrorCode::invalid_argument, "resume data does not match the sigma grid at row " + std::to_string(i));

  SweepResult result;
  std::vector<double> sigmas;
  std::vector<std::optional<double>> track;
  bool aborted = false;
  auto update_abort = [&](const SweepRecord& r) {
    sigmas.push_back(r.sigma);
    if (kind == SweepKind::power) {
      track.push_back(r.emp_1sample);
      if (!aborted)
        aborted = window_satisfied(sigmas, track, cfg.sweep.window_factor,
                                   [&](double v) { return v > cfg.sweep.power_abort; });
    } else if (kind == SweepKind::level) {
      track.push_back(r.emp_level);
      if (!aborted)
        aborted = window_satisfied(sigmas, track, cfg.sweep.window_factor,
                                   [&](double v) { return v < cfg.sweep.level_abort; });
    }
  };
  for (const auto& r : completed) {
    result.records.push_back(r);
    update_abort(r);
  }

  for (std::size_t i = completed.size(); i < grid.size(); ++i) {
    SweepRecord rec;
    rec.sigma = grid[i];
    try {
      const ExactCurves ex = exact_curves(scn, rec.sigma, cfg);
      rec.exact_unreg = ex.unregularized;
      rec.exact_oracle_map = ex.oracle_map;
      rec.exact_apriori_map = ex.apriori_map;
      rec.bound_xi = ex.bound_xi;
      if (kind == SweepKind::gamma) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "oracle_gamma=%.17g", ex.oracle_gamma);
        append_flag(rec.flags, buf);
      }
    } catch (const std::exception& e) {
      append_flag(rec.flags, error_flag("exact_error", e));
    }

    if (kind == SweepKind::level) {
      if (aborted) {
        append_flag(rec.flags, "level_aborted");
      } else {
        try {
          const LevelResult lr = empirical_level(scn, rec.sigma, cfg, policy, i);
          rec.emp_level = lr.level;
          if (lr.failures > 0) append_flag(rec.flags, "gamma_failures=" + std::to_string(lr.failures));
        } catch (const std::exception& e) {
          append_flag(rec.flags, error_flag("level_error", e));
        }
      }
    } else if (kind == SweepKind::power && aborted) {
      append_flag(rec.flags, "power_aborted");
    } else {
      try {
        const OneSampleResult r = empirical_power_1sample(scn, rec.sigma, cfg, policy, i);
        rec.emp_1sample = r.power_1sample;
        rec.emp_2sample = r.power_2sample;
        rec.gamma_mean = r.gamma.mean;
        rec.gamma_q16 = r.gamma.q16;
        rec.gamma_q84 = r.gamma.q84;
        if (r.failures > 0) append_flag(rec.flags, "gamma_failures=" + std::to_string(r.failures));
      } catch (const std::exception& e) {
        append_flag(rec.flags, error_flag("power_error", e));
      }
    }

    result.records.push_back(rec);
    update_abort(rec);
    if (on_record) on_record(rec);
  }
  return result;
}

}  // namespace maptest
