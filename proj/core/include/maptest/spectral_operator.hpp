#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "maptest/grid.hpp"

namespace maptest {

// periodic_fourier: real Fourier basis on a periodic grid, coefficient layout
//   [c0, re1, im1, re2, im2, ..., re_{N/2-1}, im_{N/2-1}, c_{N/2}]  (N even).
// odd_sine: sqrt(2/L) sin(pi k (x-a)/L), k = 1..N, on an interior grid.
// dense: explicit Euclidean-orthonormal N x N basis (column major), for small oracles.
enum class Basis { periodic_fourier, odd_sine, dense };

const char* to_string(Basis basis);

// Integer frequency carried by coefficient index i of the periodic layout.
std::size_t periodic_frequency(std::size_t index, std::size_t n);

// Operator T diagonal in an orthonormal basis: T e_k = tau_k e_k, so T* = T and
// analysis/synthesis are exact inverses under the grid inner product.
class SpectralOperator {
public:
  static SpectralOperator periodic_fourier(const Grid& grid, std::vector<double> tau, double norm_factor = 1.0);
  static SpectralOperator odd_sine(const Grid& grid, std::vector<double> tau, double norm_factor = 1.0);
  static SpectralOperator dense(const Grid& grid, std::vector<double> basis_col_major, std::vector<double> tau,
                                double norm_factor = 1.0);

  const Grid& grid() const { return grid_; }
  Basis basis() const;
  std::size_t size() const { return tau_.size(); }
  std::span<const double> singular_values() const { return tau_; }
  double norm_factor() const { return norm_factor_; }
  double operator_norm() const { return norm_; }

  // Same basis, different multipliers.
  SpectralOperator with_singular_values(std::vector<double> tau, double norm_factor) const;

  std::vector<double> analyze(const GridFunction& f) const;
  void analyze(std::span<const double> values, std::span<double> coeffs) const;
  GridFunction synthesize(std::span<const double> coeffs) const;

  GridFunction apply(const GridFunction& f) const;
  GridFunction adjoint_apply(const GridFunction& g) const;

  // (T*T)^s. For s < 0, a mode with tau_k = 0 must carry no mass
  // (|coefficient| <= 1e-10 ||f||), otherwise null_mode_division.
  GridFunction tstar_t_power(double s, const GridFunction& f) const;
  void tstar_t_power_coeffs(double s, std::span<double> coeffs) const;

  // Minimum-norm Phi0 with T*Phi0 = phi on the retained modes tau_k > rel_cutoff * max tau.
  GridFunction pseudo_inverse_adjoint_solve(const GridFunction& phi, double rel_cutoff = 0.0) const;

  struct Transform;

private:
  SpectralOperator(Grid grid, std::shared_ptr<const Transform> transform, std::vector<double> tau,
                   double norm_factor);

  Grid grid_;
  std::shared_ptr<const Transform> transform_;
  std::vector<double> tau_;
  double norm_factor_;
  double norm_;
};

}  // namespace maptest
