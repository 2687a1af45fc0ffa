#include "maptest/gamma_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "maptest/error.hpp"
#include "maptest/normal.hpp"

namespace maptest {

void validate(const GammaSearchConfig& cfg) {
  if (!(cfg.log10_min < cfg.log10_max)) fail(ErrorCode::config_error, "gamma_search.log10_min must be < log10_max");
  if (cfg.coarse_points < 3) fail(ErrorCode::config_error, "gamma_search.coarse_points must be >= 3");
  if (!(cfg.refine_tol > 0.0)) fail(ErrorCode::config_error, "gamma_search.refine_tol must be positive");
  if (!(cfg.omega >= 0.0)) fail(ErrorCode::config_error, "gamma_search.omega must be >= 0");
}

GammaChoice minimize_log10_gamma(const std::function<double(double)>& objective, const GammaSearchConfig& cfg) {
  validate(cfg);
  const int n = cfg.coarse_points;
  const double step = (cfg.log10_max - cfg.log10_min) / (n - 1);
  auto eval = [&](double lg) {
    const double v = objective(lg);
    if (!std::isfinite(v))
      fail(ErrorCode::search_failed, "objective is not finite at gamma = 1e" + std::to_string(lg));
    return v;
  };

  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double v = eval(cfg.log10_min + i * step);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double best_lg = cfg.log10_min + best * step;

  double lo = cfg.log10_min + std::max(best - 1, 0) * step;
  double hi = cfg.log10_min + std::min(best + 1, n - 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  while (hi - lo > cfg.refine_tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = eval(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = eval(mid);
  for (auto [lg, v] : {std::pair{mid, fm}, std::pair{c, fc}, std::pair{d, fd}})
    if (v < best_val) {
      best_val = v;
      best_lg = lg;
    }
  return GammaChoice{std::pow(10.0, best_lg), best_val};
}

ProbeFamily::ProbeFamily(const Scenario& scn, double mu, double sigma)
    : n_(scn.phi_coeffs.size()), sigma_(sigma), rho_(scn.rho) {
  if (!(sigma > 0.0)) fail(ErrorCode::invalid_argument, "sigma must be positive");
  const auto tau = scn.op.singular_values();
  tu_full_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    tu_full_[k] = tau[k] * scn.u_coeffs[k];
    const double phi = scn.phi_coeffs[k];
    if (tau[k] == 0.0 || phi == 0.0) continue;
    const double t2mu1 = std::pow(tau[k], 2.0 * mu + 1.0);
    const double tnu = std::pow(tau[k], scn.nu) * phi;
    modes_.push_back(Mode{k, t2mu1 * tau[k], t2mu1 * phi, tnu * tnu, tu_full_[k]});
  }
  if (modes_.empty()) fail(ErrorCode::zero_probe, "phi has no mass on the range of T");
}

ProbeFamily::Terms ProbeFamily::terms(double gamma, std::span<const double> data) const {
  const double big_g = (gamma / sigma_) * (gamma / sigma_);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (const Mode& m : modes_) {
    const double dt = 1.0 / (big_g * m.b + 1.0);
    const double ph = m.p * dt;
    s1 += ph * ph;
    s2 += m.q * dt * dt;
    s3 += ph * data[m.index];
  }
  return Terms{big_g * std::sqrt(s1), rho_ * std::sqrt(s2), big_g * s3};
}

namespace {

double j_from_sums(double big_g, double s1, double s2, double s3, double rho) {
  return (rho * std::sqrt(s2) / big_g - s3) / std::sqrt(s1);
}

}  // namespace

double ProbeFamily::j_true(double gamma) const {
  const double big_g = (gamma / sigma_) * (gamma / sigma_);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (const Mode& m : modes_) {
    const double dt = 1.0 / (big_g * m.b + 1.0);
    const double ph = m.p * dt;
    s1 += ph * ph;
    s2 += m.q * dt * dt;
    s3 += ph * m.tu;
  }
  return j_from_sums(big_g, s1, s2, s3, rho_);
}

double ProbeFamily::j_empirical(double gamma, std::span<const double> y) const {
  if (y.size() != n_) fail(ErrorCode::dimension_mismatch, "data coefficient vector has wrong length");
  const double big_g = (gamma / sigma_) * (gamma / sigma_);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (const Mode& m : modes_) {
    const double dt = 1.0 / (big_g * m.b + 1.0);
    const double ph = m.p * dt;
    s1 += ph * ph;
    s2 += m.q * dt * dt;
    s3 += ph * y[m.index];
  }
  return j_from_sums(big_g, s1, s2, s3, rho_);
}

double ProbeFamily::penalized(double gamma, std::span<const double> y, double omega) const {
  const double lg = std::log(gamma);
  return j_empirical(gamma, y) + omega * lg * lg;
}

std::vector<double> ProbeFamily::probe_coeffs(double gamma) const {
  const double big_g = (gamma / sigma_) * (gamma / sigma_);
  std::vector<double> c(n_, 0.0);
  for (const Mode& m : modes_) c[m.index] = big_g * m.p / (big_g * m.b + 1.0);
  return c;
}

double a_priori_gamma(double xi, double rho, double nu, double mu, double sigma) {
  if (!(xi > 0.0 && rho > 0.0 && nu > 0.0 && mu > 0.0 && sigma > 0.0))
    fail(ErrorCode::invalid_argument, "a_priori_gamma needs positive xi, rho, nu, mu, sigma");
  return std::pow(xi / (2.0 * rho * (nu + 1.0)), -(mu + 1.0) / nu) * sigma;
}

GammaChoice oracle_gamma(const ProbeFamily& family, const GammaSearchConfig& cfg) {
  return minimize_log10_gamma([&](double lg) { return family.j_true(std::pow(10.0, lg)); }, cfg);
}

GammaChoice oracle_gamma(const Scenario& scn, double sigma, const GammaSearchConfig& cfg) {
  return oracle_gamma(ProbeFamily(scn, scn.mu, sigma), cfg);
}

GammaChoice a_posteriori_gamma(const ProbeFamily& family, std::span<const double> y, const GammaSearchConfig& cfg) {
  return minimize_log10_gamma(
      [&](double lg) {
        const double lng = lg * std::numbers::ln10;
        return family.j_empirical(std::pow(10.0, lg), y) + cfg.omega * lng * lng;
      },
      cfg);
}

GammaChoice a_posteriori_gamma(const Scenario& scn, const GridFunction& y, double sigma,
                               const GammaSearchConfig& cfg) {
  if (!(cfg.omega >= 0.0)) fail(ErrorCode::invalid_argument, "omega must be >= 0");
  const auto yc = scn.op.analyze(y);
  return a_posteriori_gamma(ProbeFamily(scn, scn.mu, sigma), yc, cfg);
}

namespace {

void require_admissible(double nu, double mu) {
  if (!(mu > nu / 2.0 - 1.0))
    fail(ErrorCode::bound_inapplicable, "bound needs mu > nu/2 - 1 (mu=" + std::to_string(mu) +
                                            ", nu=" + std::to_string(nu) + ")");
}

}  // namespace

double power_lower_bound_gamma0(const BoundParams& p, double feature_size) {
  require_admissible(p.nu, p.mu);
  if (!(p.gamma0 > 0.0 && p.sigma > 0.0 && p.rho >= 0.0))
    fail(ErrorCode::invalid_argument, "bound needs gamma0 > 0, sigma > 0, rho >= 0");
  const double e = 1.0 / (p.mu + 1.0);
  const double num = feature_size - 2.0 * p.rho * std::pow(p.gamma0, -p.nu * e);
  return normal_cdf(normal_quantile(p.alpha) + num / (p.sigma * std::pow(p.gamma0, e)));
}

double power_lower_bound_xi(const BoundParams& p, double feature_size) {
  require_admissible(p.nu, p.mu);
  if (!(p.xi > 0.0 && p.sigma > 0.0 && p.rho > 0.0 && p.nu > 0.0))
    fail(ErrorCode::invalid_argument, "bound needs xi, sigma, rho, nu > 0");
  const double x = p.xi / (p.nu + 1.0);
  const double z = (feature_size - x) * std::pow(x, 1.0 / p.nu) / (p.sigma * std::pow(2.0 * p.rho, 1.0 / p.nu));
  return normal_cdf(normal_quantile(p.alpha) + z);
}

ResidualBound residual_bound_check(const Scenario& scn, double gamma0, double mu, double sigma) {
  require_admissible(scn.nu, mu);
  if (!(gamma0 > 0.0 && sigma > 0.0)) fail(ErrorCode::invalid_argument, "gamma0 and sigma must be positive");
  const auto tau = scn.op.singular_values();
  const double gamma = gamma0 * sigma;
  const double g2 = gamma * gamma;
  const double s2 = sigma * sigma;
  std::vector<double> res(tau.size()), probe(tau.size());
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const double rho_k = tau[k] == 0.0 ? 0.0 : g2 * std::pow(tau[k], 2.0 * mu);
    const double d = tau[k] * tau[k] * rho_k + s2;
    probe[k] = tau[k] * rho_k / d * scn.phi_coeffs[k];
    res[k] = tau[k] * probe[k] - scn.phi_coeffs[k];
  }
  scn.op.tstar_t_power_coeffs(0.5 * scn.nu, res);
  const double phin = euclidean_norm(scn.phi_coeffs);
  return ResidualBound{euclidean_norm(res), std::pow(gamma0, -scn.nu / (mu + 1.0)) * phin, euclidean_norm(probe),
                       std::pow(gamma0, 1.0 / (mu + 1.0)) * phin};
}

}  // namespace maptest
