#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "maptest/error.hpp"
#include "maptest/gamma_selection.hpp"

namespace maptest {

namespace {

struct JValue {
  double j;
  std::vector<double> grad;
};

// J and its gradient with respect to the probe coefficients.
JValue j_with_gradient(const Scenario& scn, std::span<const double> x) {
  const auto tau = scn.op.singular_values();
  const std::size_t n = x.size();
  double a2 = 0.0, b = 0.0, nn = 0.0;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tnu = std::pow(tau[k], scn.nu);
    const double r = tau[k] * x[k] - scn.phi_coeffs[k];
    w[k] = tnu * tnu * tau[k] * r;
    a2 += tnu * tnu * r * r;
    b += x[k] * tau[k] * scn.u_coeffs[k];
    nn += x[k] * x[k];
  }
  const double a = scn.rho * std::sqrt(a2);
  const double norm_x = std::sqrt(nn);
  const double j = (a - b) / norm_x;
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double da = a > 0.0 ? scn.rho * scn.rho * w[k] / a : 0.0;
    g[k] = (da - tau[k] * scn.u_coeffs[k]) / norm_x - j * x[k] / nn;
  }
  return {j, std::move(g)};
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// BFGS with Armijo backtracking.
std::vector<double> local_minimize(const Scenario& scn, std::vector<double> x) {
  const std::size_t n = x.size();
  std::vector<double> h(n * n, 0.0);
  auto reset = [&] {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  };
  reset();
  JValue cur = j_with_gradient(scn, x);
  for (int it = 0; it < 5000; ++it) {
    if (std::sqrt(dot(cur.grad, cur.grad)) < 1e-14) break;
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[i] -= h[i * n + j] * cur.grad[j];
    double slope = dot(cur.grad, p);
    if (!(slope < 0.0)) {
      reset();
      for (std::size_t i = 0; i < n; ++i) p[i] = -cur.grad[i];
      slope = dot(cur.grad, p);
    }
    double t = 1.0;
    std::vector<double> xn(n);
    JValue next;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * p[i];
      next = j_with_gradient(scn, xn);
      if (std::isfinite(next.j) && next.j <= cur.j + 1e-4 * t * slope) break;
      t *= 0.5;
      if (t < 1e-20) return x;
    }
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = next.grad[i] - cur.grad[i];
    }
    const double sy = dot(s, y);
    const double improvement = cur.j - next.j;
    x = xn;
    cur = std::move(next);
    if (sy > 1e-300) {
      std::vector<double> hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h[i * n + j] += (sy + yhy) * s[i] * s[j] / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
    }
    if (improvement < 1e-17 && std::sqrt(dot(s, s)) < 1e-15 * std::sqrt(dot(x, x))) break;
  }
  return x;
}

}  // namespace

double j_true_coeffs(const Scenario& scn, std::span<const double> probe) {
  const double n = euclidean_norm(probe);
  if (!(n > 0.0)) fail(ErrorCode::zero_probe, "probe element is zero");
  return j_with_gradient(scn, probe).j;
}

std::vector<double> inf_prior_variances(const Scenario& scn, std::span<const double> phi_dagger, double sigma, int n) {
  const auto tau = scn.op.singular_values();
  const double tol = 1e-13 * euclidean_norm(scn.phi_coeffs);
  const double s2 = sigma * sigma;
  std::vector<double> rho(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const double t = tau[i] * phi_dagger[i];
    const double s = scn.phi_coeffs[i] - t;
    const bool t_zero = std::abs(t) <= tol;
    const bool s_zero = std::abs(s) <= tol;
    if (k <= n && !s_zero && !t_zero)
      rho[i] = s2 * t / (tau[i] * tau[i] * s);
    else if (k <= n && s_zero && tau[i] > 0.0)
      rho[i] = s2 * n / (tau[i] * tau[i]);
    else
      rho[i] = s2 * std::ldexp(1.0, -k);
  }
  return rho;
}

InfPriorResult inf_prior_convergence_check(const Scenario& scn, double sigma, int n_max, std::uint64_t seed,
                                           int restarts) {
  if (scn.phi_coeffs.size() > 16) fail(ErrorCode::invalid_argument, "convergence check expects N <= 16");
  if (n_max < 1 || restarts < 1) fail(ErrorCode::invalid_argument, "n_max and restarts must be >= 1");
  const std::size_t n = scn.phi_coeffs.size();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> decade(-2.0, 2.0);

  std::vector<double> best;
  double best_j = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(n);
    const double scale = std::pow(10.0, decade(gen));
    for (double& v : x) v = scale * normal(gen);
    x = local_minimize(scn, std::move(x));
    const double j = j_true_coeffs(scn, x);
    if (j < best_j) {
      best_j = j;
      best = x;
    }
  }
  if (!(best_j < 0.0))
    fail(ErrorCode::not_detectable, "minimum of J is " + std::to_string(best_j) + ", expected a negative value");

  InfPriorResult out{best, best_j, {}, true, restarts};
  const auto tau = scn.op.singular_values();
  const double s2 = sigma * sigma;
  for (int m = 1; m <= n_max; ++m) {
    const auto rho = inf_prior_variances(scn, best, sigma, m);
    std::vector<double> probe(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(rho[k] > 0.0)) out.positive_definite = false;
      probe[k] = tau[k] * rho[k] / (tau[k] * tau[k] * rho[k] + s2) * scn.phi_coeffs[k];
    }
    out.j_values.push_back(j_true_coeffs(scn, probe));
  }
  return out;
}

}  // namespace maptest
