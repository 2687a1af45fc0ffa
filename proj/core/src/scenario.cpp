#include "maptest/scenario.hpp"

#include <cmath>
#include <numbers>

#include "maptest/error.hpp"

namespace maptest {

const char* to_string(Problem p) {
  switch (p) {
    case Problem::deconvolution: return "deconvolution";
    case Problem::differentiation: return "differentiation";
    case Problem::heat: return "heat";
    case Problem::custom: return "custom";
  }
  return "unknown";
}

Problem parse_problem(const std::string& name) {
  if (name == "deconvolution") return Problem::deconvolution;
  if (name == "differentiation") return Problem::differentiation;
  if (name == "heat") return Problem::heat;
  fail(ErrorCode::config_error, "unknown problem '" + name + "'");
}

SpectralOperator build_deconvolution(std::size_t n) {
  if (n % 2 != 0) fail(ErrorCode::invalid_argument, "deconvolution needs even N, got " + std::to_string(n));
  const Grid grid = Grid::periodic(-1.0, 1.0, n);
  constexpr double period = 2.0;
  std::vector<double> tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = static_cast<double>(periodic_frequency(i, n)) / period;
    const double d = 1.0 + 0.06 * 0.06 * xi * xi;
    tau[i] = 1.0 / (d * d);
  }
  return SpectralOperator::periodic_fourier(grid, std::move(tau), 1.0);
}

SpectralOperator build_differentiation(std::size_t n) {
  const Grid grid = Grid::interior(0.0, 1.0, n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double raw_norm = 1.0 / pi2;
  std::vector<double> tau(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double raw = 1.0 / (pi2 * static_cast<double>(k) * static_cast<double>(k));
    tau[k - 1] = raw / raw_norm;
  }
  return SpectralOperator::odd_sine(grid, std::move(tau), raw_norm);
}

SpectralOperator build_heat(std::size_t n, double t0) {
  if (!(t0 > 0.0)) fail(ErrorCode::invalid_argument, "heat time t0 must be positive");
  const Grid grid = Grid::interior(0.0, 1.0, n);
  const double a = std::numbers::pi * std::numbers::pi * t0;
  std::vector<double> tau(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    tau[k - 1] = std::exp(-a * (kk * kk - 1.0));
  }
  return SpectralOperator::odd_sine(grid, std::move(tau), std::exp(-a));
}

GridFunction beta_kernel(const Grid& grid, double c, double l, double shape) {
  if (!(shape > 0.0)) fail(ErrorCode::invalid_argument, "beta kernel shape must be positive");
  if (!(l > 0.0)) fail(ErrorCode::invalid_argument, "beta kernel length must be positive");
  if (c < grid.a() || c + l > grid.b())
    fail(ErrorCode::invalid_argument, "beta kernel interval [" + std::to_string(c) + ", " + std::to_string(c + l) +
                                          "] outside the grid domain");
  auto f = GridFunction::sample(grid, [&](double x) {
    const double t = (x - c) / l;
    if (t < 0.0 || t > 1.0) return 0.0;
    if (shape < 1.0 && (t == 0.0 || t == 1.0)) return 0.0;
    return std::pow(t, shape - 1.0) * std::pow(1.0 - t, shape - 1.0);
  });
  const double nf = norm(f);
  if (!(nf > 0.0)) fail(ErrorCode::invalid_argument, "beta kernel support contains no grid node");
  return (1.0 / nf) * std::move(f);
}

ScenarioParams default_params(Problem problem, double beta) {
  ScenarioParams p;
  p.problem = problem;
  p.beta = beta;
  switch (problem) {
    case Problem::deconvolution:
      p.feature_left = 0.0;
      p.delta = 5.0;
      break;
    case Problem::differentiation:
      p.feature_left = 0.5;
      p.delta = 3.0;
      break;
    case Problem::heat:
      p.feature_left = 0.5;
      p.delta = 0.0;
      break;
    case Problem::custom:
      fail(ErrorCode::invalid_argument, "no defaults for a custom scenario");
  }
  return p;
}

namespace {

SpectralOperator build_operator(const ScenarioParams& p) {
  switch (p.problem) {
    case Problem::deconvolution: return build_deconvolution(p.n);
    case Problem::differentiation: return build_differentiation(p.n);
    case Problem::heat: return build_heat(p.n, p.t0);
    case Problem::custom: break;
  }
  fail(ErrorCode::invalid_argument, "cannot build the operator of a custom scenario");
}

// Heat source: +1 on [s, s+l), -1 on the flanks [s-l/2, s) and [s+l, s+3l/2).
GridFunction heat_source(const Grid& grid, double s, double l) {
  return GridFunction::sample(grid, [&](double x) {
    if (x >= s && x < s + l) return 1.0;
    if ((x >= s - 0.5 * l && x < s) || (x >= s + l && x < s + 1.5 * l)) return -1.0;
    return 0.0;
  });
}

}  // namespace

GridFunction build_truth(Problem name, const SpectralOperator& op, const ScenarioParams& p) {
  const double s = p.feature_left + p.truth_offset_ratio * p.feature_length;
  switch (name) {
    case Problem::deconvolution:
    case Problem::differentiation:
      return beta_kernel(op.grid(), s, p.feature_length, p.delta);
    case Problem::heat: {
      GridFunction u = op.tstar_t_power(0.5 * p.nu, heat_source(op.grid(), s, p.feature_length));
      u *= 1.0 / norm(u);
      return u;
    }
    case Problem::custom: break;
  }
  fail(ErrorCode::invalid_argument, "no truth recipe for a custom scenario");
}

double compute_rho(const Scenario& scn) {
  if (scn.source) return norm(*scn.source);
  return norm(scn.op.tstar_t_power(-0.5 * scn.nu, scn.u_dagger));
}

Scenario make_scenario(SpectralOperator op, GridFunction phi, GridFunction u_dagger, double nu, double mu,
                       std::optional<double> rho) {
  require_same_grid(op.grid(), phi.grid(), "make_scenario(phi)");
  require_same_grid(op.grid(), u_dagger.grid(), "make_scenario(u_dagger)");
  Scenario scn{Problem::custom, std::move(op), std::move(phi), std::move(u_dagger)};
  scn.nu = nu;
  scn.mu = mu;
  scn.phi_coeffs = scn.op.analyze(scn.phi);
  scn.u_coeffs = scn.op.analyze(scn.u_dagger);
  scn.rho = rho ? *rho : compute_rho(scn);
  return scn;
}

Scenario build_scenario(const ScenarioParams& p) {
  if (p.problem == Problem::custom) fail(ErrorCode::invalid_argument, "build_scenario needs a shipped problem");
  SpectralOperator op = build_operator(p);
  GridFunction phi = beta_kernel(op.grid(), p.feature_left, p.feature_length, p.beta);
  GridFunction u = build_truth(p.problem, op, p);
  Scenario scn = make_scenario(op, std::move(phi), std::move(u), p.nu, p.mu, 0.0);
  scn.name = p.problem;
  scn.beta = p.beta;
  scn.c = p.feature_left;
  scn.l = p.feature_length;
  scn.lambda_off = p.truth_offset_ratio * p.feature_length;
  scn.delta = p.delta;
  scn.t0 = p.problem == Problem::heat ? p.t0 : 0.0;
  if (p.problem == Problem::heat) {
    // u = (T*T)^{nu/2} w before normalisation; rescale w by the same factor.
    GridFunction w = heat_source(scn.grid(), p.feature_left + p.truth_offset_ratio * p.feature_length, p.feature_length);
    const double scale = norm(scn.op.tstar_t_power(0.5 * p.nu, w));
    scn.source = (1.0 / scale) * std::move(w);
  }
  scn.rho = compute_rho(scn);
  return scn;
}

}  // namespace maptest
