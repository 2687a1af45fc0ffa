#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "maptest/scenario.hpp"

namespace maptest {

struct GammaSearchConfig {
  double log10_min = -8.0;
  double log10_max = 12.0;
  int coarse_points = 81;
  double refine_tol = 1e-4;  // in log10 gamma
  double omega = 0.0;        // weight of (ln gamma)^2

  bool operator==(const GammaSearchConfig&) const = default;
};

void validate(const GammaSearchConfig& cfg);

struct GammaChoice {
  double gamma;
  double objective;
};

// Minimise f(log10 gamma): coarse grid, then golden-section refinement inside
// the bracket around the best grid point. Non-finite values are an error.
GammaChoice minimize_log10_gamma(const std::function<double(double)>& objective, const GammaSearchConfig& cfg);

// Probes Phi_MAP(gamma^2 (T*T)^mu) at a fixed noise level, evaluated mode-wise.
// Only the ratio G = gamma^2 / sigma^2 enters:
//   Phi_k = G tau_k^(2mu+1) phi_k / (G tau_k^(2mu+2) + 1).
class ProbeFamily {
public:
  ProbeFamily(const Scenario& scn, double mu, double sigma);

  double sigma() const { return sigma_; }
  double j_true(double gamma) const;
  double j_empirical(double gamma, std::span<const double> y_coeffs) const;
  // j_empirical + omega (ln gamma)^2
  double penalized(double gamma, std::span<const double> y_coeffs, double omega) const;

  // Terms of J for one gamma: ||Phi||, ||T*Phi - phi||_{V'} and <Phi, data>.
  struct Terms {
    double probe_norm;
    double residual_vprime;
    double pairing;
  };
  Terms terms(double gamma, std::span<const double> data_coeffs) const;

  std::vector<double> probe_coeffs(double gamma) const;
  // Noiseless data coefficients T u_dagger.
  std::span<const double> clean_data() const { return tu_full_; }

private:
  struct Mode {
    std::size_t index;
    double b;    // tau^(2mu+2)
    double p;    // tau^(2mu+1) phi
    double q;    // (tau^nu phi)^2
    double tu;   // tau u
  };
  std::vector<Mode> modes_;
  std::vector<double> tu_full_;
  std::size_t n_;
  double sigma_;
  double rho_;
};

// gamma = (xi / (2 rho (nu+1)))^(-(mu+1)/nu) sigma
double a_priori_gamma(double xi, double rho, double nu, double mu, double sigma);

// argmin_gamma J_{Tu}(Phi_MAP(gamma^2 (T*T)^mu)), mu = scn.mu.
GammaChoice oracle_gamma(const Scenario& scn, double sigma, const GammaSearchConfig& cfg);
GammaChoice oracle_gamma(const ProbeFamily& family, const GammaSearchConfig& cfg);

// argmin_gamma J_Y(Phi_MAP(gamma^2 (T*T)^mu)) + omega (ln gamma)^2.
GammaChoice a_posteriori_gamma(const Scenario& scn, const GridFunction& y, double sigma, const GammaSearchConfig& cfg);
GammaChoice a_posteriori_gamma(const ProbeFamily& family, std::span<const double> y_coeffs,
                               const GammaSearchConfig& cfg);

struct BoundParams {
  double xi = 1.0;
  double gamma0 = 1.0;
  double nu = 1.0;
  double mu = 2.0;
  double rho = 1.0;
  double sigma = 1.0;
  double alpha = 0.1;
};

// Q(Q^{-1}(alpha) + (fs - 2 rho gamma0^(-nu/(mu+1))) / (sigma gamma0^(1/(mu+1))))
double power_lower_bound_gamma0(const BoundParams& params, double feature_size);
// Q(Q^{-1}(alpha) + (fs - xi/(nu+1)) (xi/(nu+1))^(1/nu) / (sigma (2 rho)^(1/nu)))
double power_lower_bound_xi(const BoundParams& params, double feature_size);

struct ResidualBound {
  double lhs1;  // ||(T*T)^{nu/2} (T*Phi - phi)||
  double rhs1;  // gamma0^(-nu/(mu+1)) ||phi||
  double lhs2;  // ||Phi||
  double rhs2;  // gamma0^(1/(mu+1)) ||phi||
  bool holds(double rel = 1e-10) const { return lhs1 <= rhs1 * (1.0 + rel) && lhs2 <= rhs2 * (1.0 + rel); }
};

// Both sides of the residual estimates for gamma = gamma0 sigma.
ResidualBound residual_bound_check(const Scenario& scn, double gamma0, double mu, double sigma);

// Variances rho_{k,n} of the prior sequence C_{0,n} built from a minimiser Phi_dagger:
//   sigma^2 t_k / (tau_k^2 s_k)  if k <= n, s_k != 0, t_k != 0
//   sigma^2 n / tau_k^2          if k <= n, s_k == 0
//   sigma^2 2^-k                 otherwise
// with t = T*Phi_dagger and s = phi - t in mode coordinates (k is 1-based).
std::vector<double> inf_prior_variances(const Scenario& scn, std::span<const double> phi_dagger_coeffs, double sigma,
                                        int n);

// J_{Tu}(Phi) for a probe given by its mode coefficients.
double j_true_coeffs(const Scenario& scn, std::span<const double> probe_coeffs);

struct InfPriorResult {
  std::vector<double> phi_dagger;  // minimiser of J, mode coefficients
  double j_optimal;
  std::vector<double> j_values;    // J(Phi_MAP(C_{0,n})), n = 1..n_max
  bool positive_definite;          // all rho_{k,n} > 0 for every n
  int restarts;
};

// Multi-start quasi-Newton minimisation of J over nonzero probes, then the C_{0,n} sequence.
InfPriorResult inf_prior_convergence_check(const Scenario& scn, double sigma, int n_max, std::uint64_t seed = 7,
                                           int restarts = 200);

}  // namespace maptest
