#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "maptest/grid.hpp"
#include "maptest/spectral_operator.hpp"

namespace maptest::testing {

// Columns are the basis functions sampled at the nodes, orthonormal under the
// h-weighted inner product. Built from trigonometric formulas, not FFTW.
inline Eigen::MatrixXd sine_basis(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double len = g.b() - g.a();
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      e(j, k) = std::sqrt(2.0 / len) * std::sin(std::numbers::pi * (k + 1) * (g.node(j) - g.a()) / len);
  return e;
}

// Real Fourier basis in the periodic coefficient layout [c0, re1, im1, ..., c_{N/2}].
inline Eigen::MatrixXd fourier_basis(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const double len = g.b() - g.a();
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * (g.node(j) - g.a()) / len;
    e(j, 0) = 1.0 / std::sqrt(len);
    for (Eigen::Index m = 1; m < n / 2; ++m) {
      e(j, 2 * m - 1) = std::sqrt(2.0 / len) * std::cos(m * t);
      e(j, 2 * m) = std::sqrt(2.0 / len) * std::sin(m * t);
    }
    e(j, n - 1) = std::cos(0.5 * n * t) / std::sqrt(len);
  }
  return e;
}

// Matrix of the diagonal operator acting on node values: E diag(tau) E^T h.
inline Eigen::MatrixXd operator_matrix(const Eigen::MatrixXd& e, std::span<const double> tau, double h) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(tau.size()));
  for (Eigen::Index k = 0; k < t.size(); ++k) t(k) = tau[static_cast<std::size_t>(k)];
  return e * t.asDiagonal() * e.transpose() * h;
}

inline Eigen::VectorXd to_eigen(const GridFunction& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t j = 0; j < f.size(); ++j) v(static_cast<Eigen::Index>(j)) = f[j];
  return v;
}

inline GridFunction random_function(const Grid& g, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  GridFunction f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = nd(gen);
  return f;
}

inline double max_abs_diff(const GridFunction& a, const Eigen::VectorXd& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b(static_cast<Eigen::Index>(j))));
  return m;
}

inline double rel_diff(const GridFunction& a, const GridFunction& b) { return norm(a - b) / std::max(norm(b), 1e-300); }

}  // namespace maptest::testing
