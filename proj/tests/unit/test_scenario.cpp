#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "helpers.hpp"
#include "maptest/error.hpp"
#include "maptest/scenario.hpp"

using namespace maptest;
using namespace maptest::testing;

TEST(Deconvolution, MultipliersAtLowFrequencies) {
  const auto op = build_deconvolution(1024);
  const auto tau = op.singular_values();
  EXPECT_EQ(tau[0], 1.0);
  EXPECT_NEAR(tau[1], 1.0 / (1.0009 * 1.0009), 1e-15);  // (1 + 0.06^2 * 0.25)^-2
  EXPECT_NEAR(tau[1], 0.998202427, 1e-9);
  EXPECT_EQ(tau[1], tau[2]);                  // m_k = m_-k
  EXPECT_EQ(op.operator_norm(), 1.0);
  EXPECT_THROW(build_deconvolution(7), Error);
}

TEST(Differentiation, NormalisedMultipliers) {
  const auto op = build_differentiation(1024);
  EXPECT_EQ(op.singular_values()[0], 1.0);
  EXPECT_DOUBLE_EQ(op.singular_values()[1], 0.25);
  EXPECT_NEAR(op.norm_factor(), 1.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
}

TEST(Heat, NormalisedMultipliers) {
  const auto op = build_heat(1024, 1e-4);
  EXPECT_NEAR(op.norm_factor(), std::exp(-std::numbers::pi * std::numbers::pi * 1e-4), 1e-15);
  EXPECT_EQ(op.singular_values()[0], 1.0);
  EXPECT_NEAR(op.singular_values()[9], std::exp(-std::numbers::pi * std::numbers::pi * 1e-4 * 99.0), 1e-15);
  EXPECT_NEAR(op.singular_values()[9], 0.906913, 1e-6);
  EXPECT_THROW(build_heat(16, 0.0), Error);
}

TEST(Differentiation, FredholmKernelQuadrature) {
  // Second antiderivative with zero boundary values has kernel min{x(1-y), (1-x)y}.
  const std::size_t n = 256;
  const auto op = build_differentiation(n);
  const Grid& g = op.grid();
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      k(i, j) = std::numbers::pi * std::numbers::pi * g.spacing() *
                std::min(g.node(i) * (1.0 - g.node(j)), (1.0 - g.node(i)) * g.node(j));
  // Smooth inputs: the quadrature error is O(h^2) only for those.
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    double a[6];
    for (double& v : a) v = nd(gen);
    const GridFunction f = GridFunction::sample(g, [&](double x) {
      double v = a[0] * x * (1.0 - x);
      for (int k = 1; k < 6; ++k) v += a[k] * std::sin(std::numbers::pi * k * x);
      return v;
    });
    const Eigen::VectorXd ref = k * to_eigen(f);
    EXPECT_LE(max_abs_diff(op.apply(f), ref) / ref.cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(BetaKernel, IndicatorNormalisation) {
  const Grid g = Grid::periodic(-1.0, 1.0, 1024);
  const double l = 5.0 / 128.0;
  const GridFunction f = beta_kernel(g, 0.0, l, 1.0);
  EXPECT_NEAR(norm(f), 1.0, 1e-12);
  EXPECT_NEAR(f[512], 1.0 / std::sqrt(l), 0.05 / std::sqrt(l));  // grid rounding of the support
  EXPECT_EQ(f[511], 0.0);
}

TEST(BetaKernel, MirrorSymmetry) {
  // Symmetric placement on the grid: support endpoints are nodes.
  const Grid g = Grid::periodic(0.0, 1.0, 512);
  const double c = 100 * g.spacing(), l = 40 * g.spacing();
  const GridFunction f = beta_kernel(g, c, l, 5.0);
  for (std::size_t j = 0; j <= 40; ++j) EXPECT_NEAR(f[100 + j], f[140 - j], 1e-12);
}

TEST(BetaKernel, OutsideDomainThrows) {
  const Grid g = Grid::interior(0.0, 1.0, 64);
  EXPECT_THROW(beta_kernel(g, 0.99, 0.05, 2.0), Error);
  EXPECT_THROW(beta_kernel(g, -0.1, 0.05, 2.0), Error);
  EXPECT_THROW(beta_kernel(g, 0.5, 0.05, 0.0), Error);
}

TEST(Scenario, ShippedInvariants) {
  for (Problem p : {Problem::deconvolution, Problem::differentiation, Problem::heat}) {
    const Scenario s = build_scenario(default_params(p, 1.0));
    EXPECT_NEAR(norm(s.phi), 1.0, 1e-10);
    EXPECT_NEAR(s.op.operator_norm(), 1.0, 1e-12);
    EXPECT_GT(inner(s.phi, s.u_dagger), 0.0) << to_string(p);
    EXPECT_TRUE(std::isfinite(s.rho));
  }
}

TEST(Scenario, HeatTruthHasUnitNorm) {
  const Scenario s = build_scenario(default_params(Problem::heat, 1.0));
  EXPECT_NEAR(norm(s.u_dagger), 1.0, 1e-10);
  ASSERT_TRUE(s.source.has_value());
  EXPECT_LE(rel_diff(s.op.tstar_t_power(0.5, *s.source), s.u_dagger), 1e-10);
}

TEST(Scenario, DeconvolutionGoldenValues) {
  const Scenario s5 = build_scenario(default_params(Problem::deconvolution, 5.0));
  EXPECT_NEAR(s5.rho / 16.2959, 1.0, 1e-2);
  EXPECT_NEAR(inner(s5.phi, s5.u_dagger) / 0.285843, 1.0, 1e-3);
  const Scenario s1 = build_scenario(default_params(Problem::deconvolution, 1.0));
  EXPECT_NEAR(inner(s1.phi, s1.u_dagger) / 0.629367, 1.0, 1e-3);
}

TEST(ComputeRho, UnitSourceAndHomogeneity) {
  const auto op = build_differentiation(64);
  std::vector<double> e1(64, 0.0);
  e1[0] = 1.0;
  const GridFunction phi = op.synthesize(e1);
  // u = (T*T)^{1/2} e_1 has rho = ||e_1|| = 1.
  const Scenario unit = make_scenario(op, phi, op.tstar_t_power(0.5, phi), 1.0, 2.0);
  EXPECT_NEAR(unit.rho, 1.0, 1e-12);

  const Scenario base = build_scenario(default_params(Problem::deconvolution, 1.0));
  const Scenario twice = make_scenario(base.op, base.phi, 2.0 * GridFunction(base.u_dagger), 1.0, 2.0);
  EXPECT_NEAR(twice.rho, 2.0 * base.rho, 1e-9 * base.rho);
}

TEST(Scenario, ParseProblem) {
  EXPECT_EQ(parse_problem("heat"), Problem::heat);
  EXPECT_THROW(parse_problem("wave"), Error);
}
