#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "maptest/grid.hpp"
#include "maptest/spectral_operator.hpp"

namespace maptest {

enum class Problem { deconvolution, differentiation, heat, custom };

const char* to_string(Problem p);
Problem parse_problem(const std::string& name);

// Periodic convolution on [-1,1] with multipliers (1 + 0.06^2 (k/2)^2)^-2.
SpectralOperator build_deconvolution(std::size_t n);
// Second antiderivative on (0,1): raw multipliers (pi k)^-2, divided by pi^-2.
SpectralOperator build_differentiation(std::size_t n);
// Heat semigroup at time t0 on (0,1): raw exp(-pi^2 t0 k^2), divided by exp(-pi^2 t0).
SpectralOperator build_heat(std::size_t n, double t0);

// ((x-c)/l)^(shape-1) (1-(x-c)/l)^(shape-1) on [c, c+l], zero elsewhere, unit grid norm.
GridFunction beta_kernel(const Grid& grid, double c, double l, double shape);

struct ScenarioParams {
  Problem problem = Problem::deconvolution;
  std::size_t n = 1024;
  double beta = 1.0;
  double mu = 2.0;
  double nu = 1.0;
  double feature_left = 0.0;      // c
  double feature_length = 5.0 / 128.0;  // l
  double truth_offset_ratio = 0.35;  // lambda = ratio * l
  double delta = 5.0;             // truth beta shape (deconvolution, differentiation)
  double t0 = 1e-4;

  bool operator==(const ScenarioParams&) const = default;
};

// Shipped defaults for a problem and feature shape.
ScenarioParams default_params(Problem problem, double beta);

struct Scenario {
  Problem name = Problem::custom;
  SpectralOperator op;
  GridFunction phi;
  GridFunction u_dagger;
  double nu = 1.0;
  double rho = 0.0;
  double mu = 2.0;
  double beta = 0.0;
  double c = 0.0;
  double l = 0.0;
  double lambda_off = 0.0;
  double delta = 0.0;
  double t0 = 0.0;
  // Source element w with u_dagger = (T*T)^{nu/2} w, when the truth is built that way.
  std::optional<GridFunction> source{};

  // Mode coefficients of phi and u_dagger, cached at construction.
  std::vector<double> phi_coeffs{};
  std::vector<double> u_coeffs{};

  const Grid& grid() const { return op.grid(); }
};

GridFunction build_truth(Problem name, const SpectralOperator& op, const ScenarioParams& params);

// ||(T*T)^{-nu/2} u_dagger||, or ||w|| when the scenario carries its source element.
double compute_rho(const Scenario& scn);

Scenario build_scenario(const ScenarioParams& params);

// Assemble a scenario from explicit parts (oracle tests, dense backends).
Scenario make_scenario(SpectralOperator op, GridFunction phi, GridFunction u_dagger, double nu, double mu,
                       std::optional<double> rho = std::nullopt);

}  // namespace maptest
