#include "maptest/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "maptest/config.hpp"
#include "maptest/csv.hpp"
#include "maptest/error.hpp"
#include "maptest/gamma_selection.hpp"
#include "maptest/map_test.hpp"
#include "maptest/normal.hpp"
#include "maptest/scenario.hpp"
#include "maptest/simulation.hpp"
#include "maptest/sweep_io.hpp"

namespace maptest {

CheckResult make_check(int criterion, std::string name, double measured, double target, double tol, Compare compare,
                       std::string detail) {
  bool pass = false;
  switch (compare) {
    case Compare::relative: pass = std::abs(measured - target) <= tol * std::abs(target); break;
    case Compare::absolute: pass = std::abs(measured - target) <= tol; break;
    case Compare::at_most: pass = measured <= target + tol; break;
    case Compare::at_least: pass = measured >= target - tol; break;
  }
  if (std::isnan(measured)) pass = false;
  return CheckResult{criterion, std::move(name), measured, target, tol, compare, pass, std::move(detail)};
}

std::string format_check(const CheckResult& r) {
  const char* op = "";
  switch (r.compare) {
    case Compare::relative: op = "rel"; break;
    case Compare::absolute: op = "abs"; break;
    case Compare::at_most: op = "<="; break;
    case Compare::at_least: op = ">="; break;
  }
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s [%d] %s  measured=%.9g target=%.9g tol=%.3g (%s)", r.pass ? "PASS" : "FAIL",
                r.criterion, r.name.c_str(), r.measured, r.target, r.tol, op);
  std::string s = buf;
  if (!r.detail.empty()) s += "  " + r.detail;
  return s;
}

bool is_fast_criterion(int c) { return c != 6 && c != 7 && c != 9; }

std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9}; }

namespace {

class Collector {
public:
  Collector(int criterion, const CheckSink& sink) : criterion_(criterion), sink_(sink) {}

  void add(std::string name, double measured, double target, double tol, Compare cmp, std::string detail = {}) {
    results_.push_back(make_check(criterion_, std::move(name), measured, target, tol, cmp, std::move(detail)));
    if (sink_) sink_(results_.back());
  }
  std::vector<CheckResult> take() { return std::move(results_); }

private:
  int criterion_;
  const CheckSink& sink_;
  std::vector<CheckResult> results_;
};

Scenario shipped(Problem p, double beta, std::size_t n = 1024) {
  ScenarioParams params = default_params(p, beta);
  params.n = n;
  return build_scenario(params);
}


double log_uniform(std::mt19937_64& g, double lo10, double hi10) {
  return std::pow(10.0, std::uniform_real_distribution<double>(lo10, hi10)(g));
}

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

RunConfig quick_config(Problem p, double beta, const VerifyOptions& opts) {
  RunConfig cfg = default_run_config(p, beta);
  apply_quick(cfg);
  cfg.seed = opts.seed;
  cfg.threads = opts.threads;
  return cfg;
}

// ---------------------------------------------------------------- 1
std::vector<CheckResult> criterion1(const VerifyOptions&, const CheckSink& sink) {
  Collector c(1, sink);
  struct Golden {
    Problem p;
    double beta;
    double ip;
  };
  const Golden goldens[] = {{Problem::deconvolution, 5.0, 0.285843},
                            {Problem::deconvolution, 1.0, 0.629367},
                            {Problem::differentiation, 3.0, 0.473619},
                            {Problem::differentiation, 1.0, 0.655476},
                            {Problem::heat, 1.0, 0.643260}};
  const std::pair<Problem, double> rhos[] = {
      {Problem::deconvolution, 16.2959}, {Problem::differentiation, 5764.93}, {Problem::heat, 7.23614}};
  for (auto [p, target] : rhos) {
    const Scenario s = shipped(p, 1.0);
    c.add(std::string("rho ") + to_string(p), s.rho, target, 1e-2, Compare::relative, "golden value, N=1024");
  }
  for (const auto& g : goldens) {
    const Scenario s = shipped(g.p, g.beta);
    char name[96];
    std::snprintf(name, sizeof name, "<phi,u> %s beta=%g", to_string(g.p), g.beta);
    c.add(name, inner(s.phi, s.u_dagger), g.ip, 1e-3, Compare::relative, "golden value, N=1024");
  }
  return c.take();
}

// ---------------------------------------------------------------- 2
std::vector<CheckResult> criterion2(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(2, sink);
  auto tampered = [&](SpectralOperator op) {
    if (opts.multiplier_scale == 1.0) return op;
    std::vector<double> tau(op.singular_values().begin(), op.singular_values().end());
    for (double& t : tau) t *= opts.multiplier_scale;
    return op.with_singular_values(std::move(tau), op.norm_factor());
  };
  const SpectralOperator dec = tampered(build_deconvolution(1024));
  const SpectralOperator dif = tampered(build_differentiation(1024));
  const SpectralOperator heat = tampered(build_heat(1024, 1e-4));

  const auto tau = dec.singular_values();
  c.add("deconvolution max multiplier", *std::max_element(tau.begin(), tau.end()), 1.0, 1e-12, Compare::absolute,
        "multiplier at k=0: " + format_double(tau[0]));
  c.add("deconvolution operator norm", dec.operator_norm(), 1.0, 1e-12, Compare::absolute);
  c.add("differentiation operator norm", dif.operator_norm(), 1.0, 1e-12, Compare::absolute);
  c.add("heat operator norm", heat.operator_norm(), 1.0, 1e-12, Compare::absolute);
  c.add("differentiation raw norm", dif.norm_factor() * dif.operator_norm(), 1.0 / (std::numbers::pi * std::numbers::pi),
        1e-12, Compare::relative);
  c.add("heat raw norm", heat.norm_factor() * heat.operator_norm(), std::exp(-std::numbers::pi * std::numbers::pi * 1e-4),
        1e-12, Compare::relative);

  // Fredholm kernel of the normalised second antiderivative: pi^2 min{x(1-y), (1-x)y}.
  const Grid& g = dif.grid();
  const std::size_t n = g.size();
  const auto x = g.nodes();
  const double h = g.spacing();
  const double scale = std::numbers::pi * std::numbers::pi * h;
  const RngPolicy policy{opts.seed};
  double worst = 0.0;
  for (std::size_t trial = 0; trial < 20; ++trial) {
    CounterRng rng = policy.stream(StreamTask::test_fixture, 2, trial);
    GridFunction f(g);
    for (std::size_t j = 0; j < n; ++j) f[j] = rng.normal();
    const GridFunction spectral = dif.apply(f);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += std::min(x[i] * (1.0 - x[j]), (1.0 - x[i]) * x[j]) * f[j];
      s *= scale;
      err = std::max(err, std::abs(s - spectral[i]));
      ref = std::max(ref, std::abs(s));
    }
    worst = std::max(worst, err / ref);
  }
  c.add("Fredholm kernel vs spectral antiderivative (sup rel, 20 inputs)", worst, 0.0, 1e-3, Compare::at_most);
  return c.take();
}

// ---------------------------------------------------------------- 3
std::vector<CheckResult> criterion3(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(3, sink);
  const std::size_t n = 64;
  const SpectralOperator op = build_differentiation(n);
  std::vector<double> e3(n, 0.0);
  e3[2] = 1.0;
  GridFunction phi = op.synthesize(e3);
  phi *= 1.0 / norm(phi);
  const Scenario scn = make_scenario(op, phi, GridFunction(op.grid()), 1.0, 2.0, 1.0);
  const PriorSpec prior = PriorSpec::power_law(1.0, 2.0);
  const auto ghat = eigenvector_diagnostic(scn, prior, scn.phi);
  c.add("eigenvector diagnostic finds gamma_hat", ghat ? 1.0 : 0.0, 1.0, 0.0, Compare::absolute);
  if (!ghat) return c.take();

  const std::pair<double, double> pairs[] = {{0.1, 0.1}, {0.01, 0.05}, {1.0, 0.2}, {1e-3, 0.01}, {0.05, 0.5}};
  const GridFunction zero(op.grid());
  const RngPolicy policy{opts.seed};
  double worst_size = 0.0, worst_unreg_size = 0.0, worst_t = 0.0, worst_norm = 0.0;
  long disagreements = 0, total = 0;
  for (std::size_t i = 0; i < std::size(pairs); ++i) {
    const auto [sigma, alpha] = pairs[i];
    const GridFunction m0 = eigenvector_level_mean(scn, prior, sigma, alpha);
    const PriorSpec pm = prior.with_mean(m0);
    const GridFunction probe = map_probe(scn, prior, sigma);
    const MapTest map{probe, map_threshold(scn, probe, m0), alpha, 1.0, Provenance::eigenvector_closed_form};
    worst_size = std::max(worst_size, std::abs(exact_size(scn, map, zero, sigma) - alpha));
    const MapTest unreg = unregularized_test(scn, sigma, alpha);
    worst_unreg_size = std::max(worst_unreg_size, std::abs(exact_size(scn, unreg, zero, sigma) - alpha));

    const double kappa = *ghat / (*ghat + sigma * sigma);
    const GridFunction ts = op.adjoint_apply(probe) - kappa * scn.phi;
    worst_t = std::max(worst_t, norm(ts));
    worst_norm = std::max(worst_norm, std::abs(norm(probe) - kappa * norm(unreg.probe)) / norm(probe));

    // Half the draws at the hypothesis boundary, half under a detectable alternative.
    const double shift = 2.0 * sigma / op.singular_values()[2];
    for (std::size_t m = 0; m < 10000; ++m) {
      CounterRng rng = policy.stream(StreamTask::test_fixture, 300 + i, m);
      const GridFunction u = (m % 2 == 0) ? zero : shift * GridFunction(scn.phi);
      const GridFunction y = sample_data(scn, u, sigma, rng);
      if (map_decision(scn, pm, y, sigma) != unreg.decide(y)) ++disagreements;
      ++total;
    }
  }
  c.add("exact size of MAP test at u=0 equals alpha", worst_size, 0.0, 1e-10, Compare::at_most, "max over 5 (sigma, alpha)");
  c.add("exact size of unregularized test at u=0 equals alpha", worst_unreg_size, 0.0, 1e-10, Compare::at_most);
  c.add("MAP vs unregularized decision agreement", 1.0 - static_cast<double>(disagreements) / total, 1.0, 0.0,
        Compare::absolute, std::to_string(total) + " samples");
  c.add("||T*Phi_MAP - k phi||", worst_t, 0.0, 1e-10, Compare::at_most, "k = gamma_hat/(gamma_hat+sigma^2)");
  c.add("||Phi_MAP|| = k ||Phi0|| (rel)", worst_norm, 0.0, 1e-10, Compare::at_most);
  return c.take();
}

// ---------------------------------------------------------------- 4
std::vector<CheckResult> criterion4(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(4, sink);
  std::mt19937_64 gen(opts.seed ^ 0x4444);
  const RngPolicy policy{opts.seed};

  // Monte Carlo vs exact size for fixed-gamma tests.
  {
    const Scenario scn = shipped(Problem::deconvolution, 5.0, 256);
    const int M = 10000;
    double worst = -std::numeric_limits<double>::infinity();
    std::string detail;
    for (std::size_t i = 0; i < 10; ++i) {
      const double sigma = log_uniform(gen, -3.0, -1.0);
      const double alpha = uniform(gen, 0.05, 0.3);
      const double gamma = sigma * log_uniform(gen, -1.0, 2.0);
      const double target_size = uniform(gen, 0.05, 0.95);
      GridFunction probe = map_probe(scn, PriorSpec::power_law(gamma, scn.mu), sigma);
      const MapTest test = make_regularized_test(scn, probe, sigma, alpha, gamma, Provenance::fixed);
      // Scale the truth so the size sits at target_size.
      const double base = inner(scn.u_dagger, scn.op.adjoint_apply(test.probe));
      const double t = (test.threshold + sigma * norm(test.probe) * normal_quantile(target_size)) / base;
      const GridFunction u = t * GridFunction(scn.u_dagger);
      const double exact = exact_size(scn, test, u, sigma);
      int rejects = 0;
      for (int m = 0; m < M; ++m) {
        CounterRng rng = policy.stream(StreamTask::test_fixture, 400 + i, static_cast<std::uint64_t>(m));
        rejects += test.decide(sample_data(scn, u, sigma, rng)) ? 1 : 0;
      }
      const double emp = static_cast<double>(rejects) / M;
      const double z = std::abs(emp - exact) / std::sqrt(exact * (1.0 - exact) / M);
      if (z > worst) {
        worst = z;
        detail = "worst: exact=" + format_double(exact) + " empirical=" + format_double(emp);
      }
    }
    c.add("exact size vs Monte Carlo (|diff|/SE, 10 configs, M=1e4)", worst, 3.0, 0.0, Compare::at_most, detail);
  }

  const Scenario scns[] = {shipped(Problem::deconvolution, 1.0), shipped(Problem::differentiation, 1.0),
                           shipped(Problem::heat, 1.0)};

  // exact_power_regularized == exact_size under calibrated m0.
  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Scenario& scn = scns[i % 3];
      const double sigma = log_uniform(gen, -4.0, -0.5);
      const double alpha = uniform(gen, 0.01, 0.4);
      const double gamma = sigma * log_uniform(gen, 0.0, 6.0);
      const GridFunction probe = map_probe(scn, PriorSpec::power_law(gamma, scn.mu), sigma);
      const GridFunction m0 = calibrate_m0(scn, probe, sigma, alpha);
      const MapTest test{probe, map_threshold(scn, probe, m0), alpha, gamma, Provenance::fixed};
      const double a = exact_size(scn, test, scn.u_dagger, sigma);
      const double b = exact_power_regularized(scn, probe, sigma, alpha, scn.u_dagger);
      worst = std::max(worst, std::abs(a - b));
    }
    c.add("exact power == exact size with calibrated m0 (50 draws)", worst, 0.0, 1e-10, Compare::at_most);
  }

  // Normal equation (T T* + sigma^2 C0^{-1}) Phi = T phi, mode-wise.
  {
    double worst = 0.0;
    for (const Scenario& scn : scns)
      for (double sigma : {1e-1, 1e-3, 1e-5})
        for (double g0 : {1e-2, 1.0, 1e3}) {
          const double gamma = g0 * sigma;
          const PriorSpec prior = PriorSpec::power_law(gamma, scn.mu);
          const auto rho = mode_variances(scn, prior);
          const auto pc = map_probe_coeffs(scn, prior, sigma);
          const auto tau = scn.op.singular_values();
          double r2 = 0.0, t2 = 0.0;
          for (std::size_t k = 0; k < tau.size(); ++k) {
            const double rhs = tau[k] * scn.phi_coeffs[k];
            t2 += rhs * rhs;
            if (rho[k] == 0.0) continue;  // prior variance underflowed; Phi_k = 0 exactly
            const double r = (tau[k] * tau[k] + sigma * sigma / rho[k]) * pc[k] - rhs;
            r2 += r * r;
          }
          worst = std::max(worst, std::sqrt(r2 / t2));
        }
    c.add("Tikhonov normal-equation residual (rel)", worst, 0.0, 1e-8, Compare::at_most);
  }
  return c.take();
}

// ---------------------------------------------------------------- 5
std::vector<CheckResult> criterion5(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(5, sink);
  std::mt19937_64 gen(opts.seed ^ 0x5555);
  for (Problem p : {Problem::deconvolution, Problem::differentiation, Problem::heat}) {
    const Scenario scn = shipped(p, 1.0);
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double gamma0 = log_uniform(gen, -2.0, 6.0);
      const double mu = uniform(gen, 1.0, 4.0);
      const double sigma = log_uniform(gen, -6.0, 0.0);
      const ResidualBound b = residual_bound_check(scn, gamma0, mu, sigma);
      if (!b.holds()) ++violations;
      worst = std::max({worst, b.lhs1 / b.rhs1, b.lhs2 / b.rhs2});
    }
    c.add(std::string("residual estimates hold, ") + to_string(p), violations, 0.0, 0.0, Compare::at_most,
          "max lhs/rhs = " + format_double(worst));
  }

  for (Problem p : {Problem::deconvolution, Problem::differentiation, Problem::heat}) {
    const Scenario scn = shipped(p, 1.0);
    RunConfig cfg = quick_config(p, 1.0, opts);
    const auto sigmas = sigma_grid(cfg.sweep, SweepKind::power);
    double worst = -std::numeric_limits<double>::infinity();
    for (double s : sigmas) {
      const ExactCurves ex = exact_curves(scn, s, cfg.simulation());
      worst = std::max(worst, ex.bound_xi - ex.apriori_map);
    }
    c.add(std::string("bound_xi <= exact a priori MAP power, ") + to_string(p), worst, 0.0, 1e-12, Compare::at_most,
          std::to_string(sigmas.size()) + " sigma points");
  }

  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    BoundParams bp;
    bp.nu = uniform(gen, 0.5, 2.0);
    bp.mu = uniform(gen, 1.0, 4.0);
    bp.rho = log_uniform(gen, -1.0, 3.0);
    bp.xi = uniform(gen, 0.05, 1.0);
    bp.sigma = log_uniform(gen, -5.0, 0.0);
    bp.alpha = uniform(gen, 0.01, 0.4);
    worst = std::max(worst, std::abs(power_lower_bound_xi(bp, bp.xi / (bp.nu + 1.0)) - bp.alpha));
  }
  c.add("bound equals alpha at feature size xi/(nu+1)", worst, 0.0, 1e-15, Compare::at_most);
  return c.take();
}

// ---------------------------------------------------------------- 6
std::vector<CheckResult> criterion6(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(6, sink);
  for (Problem p : {Problem::deconvolution, Problem::differentiation, Problem::heat}) {
    const Scenario scn = shipped(p, 1.0);
    RunConfig cfg = quick_config(p, 1.0, opts);
    cfg.sweep.sigma_floor = 1e-3;
    const double limit = cfg.alpha1 + 3.0 * std::sqrt(cfg.alpha1 * (1.0 - cfg.alpha1) / cfg.sweep.m_level);
    const SweepResult r = run_sweep(scn, cfg.simulation(), RngPolicy{cfg.seed}, SweepKind::level);
    double worst = 0.0;
    int errors = 0, points = 0;
    for (const auto& rec : r.records) {
      if (rec.emp_level) {
        worst = std::max(worst, *rec.emp_level);
        ++points;
      } else if (rec.flags.find("level_error") != std::string::npos) {
        ++errors;
      }
    }
    c.add(std::string("max empirical level, ") + to_string(p), worst, limit, 0.0, Compare::at_most,
          std::to_string(points) + " sigma points");
    c.add(std::string("level sweep errors, ") + to_string(p), errors, 0.0, 0.0, Compare::at_most);
  }
  return c.take();
}

// ---------------------------------------------------------------- 7
std::vector<CheckResult> criterion7(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(7, sink);
  for (Problem p : {Problem::deconvolution, Problem::differentiation, Problem::heat}) {
    const Scenario scn = shipped(p, 1.0);
    const RunConfig cfg = quick_config(p, 1.0, opts);
    const SweepResult r = run_sweep(scn, cfg.simulation(), RngPolicy{cfg.seed}, SweepKind::power);
    double best = 0.0;
    double at_sigma = 0.0;
    for (const auto& rec : r.records)
      if (rec.emp_1sample && *rec.emp_1sample > best) {
        best = *rec.emp_1sample;
        at_sigma = rec.sigma;
      }
    c.add(std::string("1-sample power reaches 0.99, ") + to_string(p), best, 0.99, 0.0, Compare::at_least,
          "at sigma=" + format_double(at_sigma));
    if (p != Problem::deconvolution) continue;

    // Mid-noise regime: oracle MAP power strictly between 0.2 and 0.9.
    int mid = 0, unreg_violations = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    const int M = cfg.sweep.m_power;
    for (const auto& rec : r.records) {
      if (!rec.exact_oracle_map || *rec.exact_oracle_map < 0.2 || *rec.exact_oracle_map > 0.9) continue;
      if (!rec.exact_unreg || !rec.exact_apriori_map || !rec.emp_1sample || !rec.emp_2sample) continue;
      ++mid;
      const double lowest_map =
          std::min({*rec.exact_oracle_map, *rec.exact_apriori_map, *rec.emp_1sample, *rec.emp_2sample});
      if (!(*rec.exact_unreg < lowest_map)) ++unreg_violations;
      const double p1 = *rec.emp_1sample;
      worst_gap = std::max(worst_gap, *rec.emp_2sample - p1 - 3.0 * std::sqrt(p1 * (1.0 - p1) / M));
    }
    c.add("mid-noise sigma points, deconvolution", mid, 1.0, 0.0, Compare::at_least);
    c.add("unregularized below every MAP variant (violations), deconvolution", unreg_violations, 0.0, 0.0,
          Compare::at_most, std::to_string(mid) + " mid-noise points");
    c.add("2-sample - 1-sample - 3 SE, deconvolution", mid > 0 ? worst_gap : std::nan(""), 0.0, 0.0,
          Compare::at_most);
  }
  return c.take();
}

// ---------------------------------------------------------------- 8
std::vector<CheckResult> criterion8(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(8, sink);
  const std::size_t n = 4;
  const Grid grid = Grid::interior(0.0, 1.0, n);
  // Normalised Hadamard basis, column major.
  std::vector<double> q = {0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5, 0.5, 0.5, -0.5, -0.5, 0.5, -0.5, -0.5, 0.5};
  const std::vector<double> tau = {1.0, 0.5, 0.25, 0.125};
  const SpectralOperator op = SpectralOperator::dense(grid, q, tau);
  const std::vector<double> phi_c = {0.5, 0.5, 0.5, 0.5};
  const std::vector<double> w = {0.6, -0.3, 0.5, 0.4};
  std::vector<double> u_c(n);
  for (std::size_t k = 0; k < n; ++k) u_c[k] = tau[k] * w[k];
  const Scenario scn = make_scenario(op, op.synthesize(phi_c), op.synthesize(u_c), 1.0, 2.0);
  const int n_max = 64;
  const InfPriorResult r = inf_prior_convergence_check(scn, 0.1, n_max, opts.seed);
  const double j_last = r.j_values.back();
  double rise = -std::numeric_limits<double>::infinity();
  for (double j : r.j_values) rise = std::max(rise, j - r.j_values.front());
  c.add("J(Phi_MAP(C_0,64)) - J(Phi_dagger)", std::abs(j_last - r.j_optimal), 0.0, 1e-3, Compare::at_most,
        "J* = " + format_double(r.j_optimal) + ", " + std::to_string(r.restarts) + " restarts");
  c.add("final J < 0", j_last, 0.0, 0.0, Compare::at_most);
  c.add("J_n never exceeds J_1", rise, 0.0, 1e-9, Compare::at_most,
        r.positive_definite ? "all C_0,n positive definite" : "some rho_k,n <= 0");
  return c.take();
}

// ---------------------------------------------------------------- 9
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CheckResult> criterion9(const VerifyOptions& opts, const CheckSink& sink) {
  Collector c(9, sink);
  namespace fs = std::filesystem;
  const unsigned other_threads = std::max(3u, opts.threads + 1);
  for (SweepKind kind : {SweepKind::power, SweepKind::level}) {
    std::string texts[2];
    for (int run = 0; run < 2; ++run) {
      RunConfig cfg = quick_config(Problem::deconvolution, 1.0, opts);
      cfg.threads = run == 0 ? 1 : other_threads;
      if (kind == SweepKind::level) cfg.sweep.sigma_floor = 1e-3;
      const fs::path dir = opts.scratch_dir / ("run" + std::to_string(run));
      fs::remove_all(dir);
      cfg.out_dir = dir.string();
      const Scenario scn = shipped(Problem::deconvolution, 1.0);
      const SweepFiles files = run_sweep_to_files(scn, cfg, kind);
      texts[run] = slurp(files.csv);
    }
    c.add(std::string("byte-identical CSV, threads 1 vs ") + std::to_string(other_threads) + ", " + to_string(kind),
          texts[0] == texts[1] && !texts[0].empty() ? 1.0 : 0.0, 1.0, 0.0, Compare::absolute,
          std::to_string(texts[0].size()) + " bytes");
  }
  return c.take();
}

}  // namespace

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& opts, const CheckSink& sink) {
  try {
    switch (criterion) {
      case 1: return criterion1(opts, sink);
      case 2: return criterion2(opts, sink);
      case 3: return criterion3(opts, sink);
      case 4: return criterion4(opts, sink);
      case 5: return criterion5(opts, sink);
      case 6: return criterion6(opts, sink);
      case 7: return criterion7(opts, sink);
      case 8: return criterion8(opts, sink);
      case 9: return criterion9(opts, sink);
      default: fail(ErrorCode::invalid_argument, "no acceptance criterion " + std::to_string(criterion));
    }
  } catch (const Error& e) {
    if (criterion < 1 || criterion > 9) throw;
    CheckResult r = make_check(criterion, "criterion raised an error", 1.0, 0.0, 0.0, Compare::absolute, e.what());
    if (sink) sink(r);
    return {r};
  }
}

std::vector<CheckResult> run_verification(const std::vector<int>& criteria, const VerifyOptions& opts,
                                          const CheckSink& sink) {
  std::vector<CheckResult> all;
  for (int k : criteria) {
    auto r = run_criterion(k, opts, sink);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

}  // namespace maptest
