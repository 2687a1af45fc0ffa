#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "maptest/error.hpp"
#include "maptest/map_test.hpp"
#include "maptest/normal.hpp"
#include "maptest/rng.hpp"
#include "maptest/simulation.hpp"

using namespace maptest;
using namespace maptest::testing;

namespace {

// Dense scenario on N points with a random orthonormal basis and given multipliers.
Scenario dense_scenario(std::vector<double> tau, std::vector<double> phi_c, std::vector<double> u_c,
                        unsigned seed = 1) {
  const std::size_t n = tau.size();
  const Grid g = Grid::interior(0.0, 1.0, n);
  std::srand(seed);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd qm = Eigen::HouseholderQR<Eigen::MatrixXd>(r).householderQ();
  std::vector<double> q(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t j = 0; j < n; ++j) q[c * n + j] = qm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
  const auto op = SpectralOperator::dense(g, q, std::move(tau));
  return make_scenario(op, op.synthesize(phi_c), op.synthesize(u_c), 1.0, 2.0);
}

const Scenario& deconv1() {
  static const Scenario s = build_scenario(default_params(Problem::deconvolution, 1.0));
  return s;
}

}  // namespace

TEST(Posterior, NoiselessPriorConsistentDataIsFixedPoint) {
  const Scenario& s = deconv1();
  std::mt19937_64 gen(1);
  const GridFunction m0 = s.op.apply(random_function(s.grid(), gen));
  const PriorSpec prior = PriorSpec::power_law(0.3, 2.0).with_mean(m0);
  const auto post = posterior_summary(s, prior, s.op.apply(m0), 0.01);
  EXPECT_LE(rel_diff(post.mean, m0), 1e-10);
}

TEST(Posterior, HugeNoiseReturnsPriorFeature) {
  const Scenario& s = deconv1();
  const GridFunction m0 = 0.7 * GridFunction(s.phi);
  const PriorSpec prior = PriorSpec::power_law(1.0, 2.0).with_mean(m0);
  std::mt19937_64 gen(2);
  const auto post = posterior_summary(s, prior, random_function(s.grid(), gen), 1e8);
  EXPECT_NEAR(post.feature_mean, inner(s.phi, m0), 1e-6 * 0.7);
  const auto post6 = posterior_summary(s, prior, random_function(s.grid(), gen), 1e6);
  EXPECT_LE(rel_diff(post6.mean, m0), 1e-6);
}

TEST(Posterior, ThreeByThreeDenseOracle) {
  const Scenario s = dense_scenario({0.9, 0.4, 0.2}, {0.3, -0.5, 0.8}, {0.0, 0.0, 0.0});
  const double sigma = 0.3;
  const PriorSpec prior = PriorSpec::diagonal({2.0, 0.5, 1.5}).with_mean(s.op.synthesize(std::vector<double>{0.1, 0.2, -0.3}));
  const GridFunction y(s.grid(), {0.4, -0.2, 1.1});
  const auto post = posterior_summary(s, prior, y, sigma);

  // Explicit matrices in the coordinates a = sqrt(h) Q^T f (Euclidean inner product).
  const double sh = std::sqrt(s.grid().spacing());
  auto coords = [&](const GridFunction& f) {
    const auto a = s.op.analyze(f);
    return Eigen::Vector3d(a[0], a[1], a[2]);
  };
  const Eigen::Matrix3d t = Eigen::Vector3d(0.9, 0.4, 0.2).asDiagonal();
  const Eigen::Matrix3d c0 = Eigen::Vector3d(2.0, 0.5, 1.5).asDiagonal();
  const Eigen::Vector3d m0 = coords(*prior.m0), yc = coords(y), ph = coords(s.phi);
  const Eigen::Matrix3d gain = c0 * t.transpose() * (t * c0 * t.transpose() + sigma * sigma * Eigen::Matrix3d::Identity()).inverse();
  const Eigen::Vector3d m = m0 + gain * (yc - t * m0);
  const Eigen::Matrix3d c = c0 - gain * t * c0;
  const Eigen::Vector3d mc = coords(post.mean);
  EXPECT_LE((m - mc).norm(), 1e-12);
  EXPECT_NEAR(post.feature_var, ph.dot(c * ph), 1e-12);
  EXPECT_NEAR(post.feature_mean, ph.dot(m), 1e-12);
  (void)sh;
}

TEST(MapProbe, TwoByTwoDenseOracle) {
  const Scenario s = dense_scenario({1.0, 0.5}, {1.0, 0.0}, {0.0, 0.0});
  const auto c = map_probe_coeffs(s, PriorSpec::diagonal({1.0, 1.0}), 1.0);
  EXPECT_NEAR(c[0], 0.5, 1e-15);
  EXPECT_NEAR(c[1], 0.0, 1e-15);
}

TEST(MapProbe, ZeroFeatureGivesZeroProbe) {
  const Scenario& s = deconv1();
  const Scenario z = make_scenario(s.op, GridFunction(s.grid()), s.u_dagger, 1.0, 2.0, s.rho);
  const GridFunction p = map_probe(z, PriorSpec::power_law(1.0, 2.0), 0.1);
  EXPECT_EQ(norm(p), 0.0);
}

TEST(MapProbe, IndependentOfPriorMean) {
  const Scenario& s = deconv1();
  const PriorSpec a = PriorSpec::power_law(0.5, 2.0);
  const PriorSpec b = a.with_mean(3.0 * GridFunction(s.phi));
  const GridFunction pa = map_probe(s, a, 0.05), pb = map_probe(s, b, 0.05);
  for (std::size_t j = 0; j < pa.size(); ++j) ASSERT_EQ(pa[j], pb[j]);
}

TEST(MapProbe, TikhonovNormalEquation) {
  for (Problem p : {Problem::deconvolution, Problem::differentiation}) {
    const Scenario s = build_scenario(default_params(p, 1.0));
    const PriorSpec prior = PriorSpec::power_law(0.2, s.mu);
    const double sigma = 1e-3;
    const auto rho = mode_variances(s, prior);
    const auto c = map_probe_coeffs(s, prior, sigma);
    const auto tau = s.op.singular_values();
    double r2 = 0.0, t2 = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double rhs = tau[k] * s.phi_coeffs[k];
      const double r = (tau[k] * tau[k] + sigma * sigma / rho[k]) * c[k] - rhs;
      r2 += r * r;
      t2 += rhs * rhs;
    }
    EXPECT_LE(std::sqrt(r2 / t2), 1e-8);
  }
}

TEST(VPrime, ElementaryCases) {
  const Scenario& s = deconv1();
  EXPECT_EQ(vprime_norm(s, GridFunction(s.grid())), 0.0);
  std::vector<double> e(s.op.size(), 0.0);
  e[5] = 1.0;
  EXPECT_NEAR(vprime_norm(s, s.op.synthesize(e)), s.rho * s.op.singular_values()[5], 1e-12 * s.rho);
  const Scenario nu0 = make_scenario(s.op, s.phi, s.u_dagger, 0.0, 2.0, 3.0);
  EXPECT_NEAR(vprime_norm(nu0, s.phi), 3.0 * norm(s.phi), 1e-12);
}

TEST(Threshold, ZeroResidualCases) {
  const auto op = build_differentiation(32);
  std::vector<double> e(32, 0.0);
  e[0] = 1.0;
  const GridFunction phi = op.synthesize(e);
  const Scenario s = make_scenario(op, phi, GridFunction(op.grid()), 1.0, 2.0, 1.0);
  const GridFunction probe = op.pseudo_inverse_adjoint_solve(phi);
  EXPECT_NEAR(threshold_c(s, probe, 0.1, 0.1), 0.1 * norm(probe) * normal_quantile(0.9), 1e-14);
  EXPECT_NEAR(threshold_c(s, probe, 0.1, 0.5), 0.0, 1e-14);
  EXPECT_THROW(threshold_c(s, GridFunction(op.grid()), 0.1, 0.1), Error);
  EXPECT_THROW(calibrate_m0(s, probe, 0.1, 0.1), Error);  // zero residual: not identifiable
}

TEST(Threshold, DirectReevaluation) {
  const Scenario s = build_scenario(default_params(Problem::deconvolution, 5.0));
  const double sigma = 0.01, alpha = 0.1;
  const GridFunction probe = map_probe(s, PriorSpec::power_law(0.05, 2.0), sigma);
  // Independent route: node-space residual, then (T*T)^{1/2} via the multipliers on its coefficients.
  const GridFunction r = s.op.apply(probe) - s.phi;
  const auto rc = s.op.analyze(r);
  double v2 = 0.0;
  for (std::size_t k = 0; k < rc.size(); ++k) v2 += std::pow(s.op.singular_values()[k] * rc[k], 2);
  const double expect = sigma * norm(probe) * -normal_quantile(alpha) + s.rho * std::sqrt(v2);
  EXPECT_NEAR(threshold_c(s, probe, sigma, alpha), expect, 1e-12 * std::abs(expect));
}

TEST(CalibrateM0, LinearInThreshold) {
  const Scenario& s = deconv1();
  const GridFunction probe = map_probe(s, PriorSpec::power_law(0.1, 2.0), 0.1);
  const GridFunction a = calibrate_m0(s, probe, 0.1, 0.1);
  EXPECT_NEAR(map_threshold(s, probe, a), threshold_c(s, probe, 0.1, 0.1), 1e-12);
  // alpha = 0.5 removes the noise term; the scalar shrinks accordingly.
  const GridFunction b = calibrate_m0(s, probe, 0.1, 0.5);
  const double ratio = inner(a, s.phi) / inner(b, s.phi);
  EXPECT_NEAR(ratio, threshold_c(s, probe, 0.1, 0.1) / threshold_c(s, probe, 0.1, 0.5), 1e-10);
}

TEST(CalibrateM0, MapRuleEqualsThresholdRule) {
  const Scenario& s = deconv1();
  const double sigma = 0.1, alpha = 0.1, gamma = 0.5;
  const PriorSpec prior = PriorSpec::power_law(gamma, 2.0);
  const GridFunction probe = map_probe(s, prior, sigma);
  const GridFunction m0 = calibrate_m0(s, probe, sigma, alpha);
  const double c = threshold_c(s, probe, sigma, alpha);
  const double scale = c / inner(s.op.apply(s.u_dagger), probe);
  const RngPolicy policy{9};
  int agree = 0, rejections = 0;
  for (int m = 0; m < 1000; ++m) {
    CounterRng rng = policy.stream(StreamTask::test_fixture, 1, m);
    // Truth on the decision boundary so that both outcomes occur.
    const GridFunction y = sample_data(s, scale * GridFunction(s.u_dagger), sigma, rng);
    const bool a = map_decision(s, prior.with_mean(m0), y, sigma);
    const bool b = inner(y, probe) > c;
    agree += a == b;
    rejections += b;
  }
  EXPECT_EQ(agree, 1000);
  EXPECT_GT(rejections, 0);
  EXPECT_LT(rejections, 1000);
}

TEST(ExactSize, BoundaryAndPowerIdentities) {
  const Scenario& s = deconv1();
  const double sigma = 0.05;
  const GridFunction probe = map_probe(s, PriorSpec::power_law(0.3, 2.0), sigma);
  const MapTest t = make_regularized_test(s, probe, sigma, 0.1, 0.3, Provenance::fixed);
  // u on the decision boundary.
  const double base = inner(s.u_dagger, s.op.adjoint_apply(probe));
  const GridFunction u = (t.threshold / base) * GridFunction(s.u_dagger);
  EXPECT_NEAR(exact_size(s, t, u, sigma), 0.5, 1e-12);
  // exact power with J = 0 is alpha.
  const double za = normal_quantile(0.1);
  EXPECT_NEAR(normal_cdf(za - 0.0 / sigma), 0.1, 1e-15);
  const double j = -sigma * (normal_quantile(0.9) - normal_quantile(0.1));
  EXPECT_NEAR(normal_cdf(za - j / sigma), 0.9, 1e-12);
}

TEST(ExactSize, MonteCarloAgreement) {
  const Scenario s = build_scenario([] {
    auto p = default_params(Problem::deconvolution, 5.0);
    p.n = 128;
    return p;
  }());
  const double sigma = 0.02;
  const GridFunction probe = map_probe(s, PriorSpec::power_law(0.1, 2.0), sigma);
  const MapTest t = make_regularized_test(s, probe, sigma, 0.2, 0.1, Provenance::fixed);
  const double base = inner(s.u_dagger, s.op.adjoint_apply(probe));
  const GridFunction u = ((t.threshold - 0.3 * sigma * norm(probe)) / base) * GridFunction(s.u_dagger);
  const double p = exact_size(s, t, u, sigma);
  const int m = 10000;
  const RngPolicy policy{3};
  int rej = 0;
  for (int i = 0; i < m; ++i) {
    CounterRng rng = policy.stream(StreamTask::test_fixture, 2, i);
    rej += t.decide(sample_data(s, u, sigma, rng));
  }
  EXPECT_LE(std::abs(double(rej) / m - p), 3.0 * std::sqrt(p * (1 - p) / m));
}

TEST(JFunctional, ZeroAtEigenProbeAndScaleInvariantWithoutSource) {
  const auto op = build_differentiation(32);
  std::vector<double> e(32, 0.0);
  e[1] = 1.0;
  const GridFunction phi = op.synthesize(e);
  const Scenario s = make_scenario(op, phi, GridFunction(op.grid()), 1.0, 2.0, 1.0);
  EXPECT_NEAR(j_true(s, op.pseudo_inverse_adjoint_solve(phi), s.u_dagger), 0.0, 1e-14);

  // Homogeneous of degree 0 only when the V' term vanishes (rho = 0).
  const Scenario& d = deconv1();
  const Scenario d0 = make_scenario(d.op, d.phi, d.u_dagger, 1.0, 2.0, 0.0);
  const GridFunction probe = map_probe(d0, PriorSpec::power_law(0.2, 2.0), 0.01);
  EXPECT_NEAR(j_true(d0, 2.0 * GridFunction(probe), d0.u_dagger), j_true(d0, probe, d0.u_dagger), 1e-12);
}

TEST(JFunctional, EmpiricalIsUnbiased) {
  const Scenario s = build_scenario([] {
    auto p = default_params(Problem::deconvolution, 1.0);
    p.n = 128;
    return p;
  }());
  const double sigma = 0.05;
  const GridFunction probe = map_probe(s, PriorSpec::power_law(0.5, 2.0), sigma);
  const double jt = j_true(s, probe, s.u_dagger);
  const RngPolicy policy{5};
  const int m = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < m; ++i) {
    CounterRng rng = policy.stream(StreamTask::test_fixture, 3, i);
    const double j = j_empirical(s, probe, sample_data(s, s.u_dagger, sigma, rng));
    sum += j;
    sum2 += j * j;
  }
  const double mean = sum / m, sd = std::sqrt(sum2 / m - mean * mean);
  EXPECT_LE(std::abs(mean - jt), 3.0 * sd / std::sqrt(double(m)));
  EXPECT_NEAR(sd, sigma, 0.05 * sigma);  // <eps, probe/||probe||> ~ N(0,1)
}

TEST(Unregularized, EigenvectorCaseAndSize) {
  const auto op = build_differentiation(32);
  std::vector<double> e(32, 0.0);
  e[0] = 1.0;
  const GridFunction phi = op.synthesize(e);
  const Scenario s = make_scenario(op, phi, GridFunction(op.grid()), 1.0, 2.0, 1.0);
  const MapTest t = unregularized_test(s, 0.2, 0.1);
  EXPECT_LE(rel_diff(t.probe, phi), 1e-13);
  EXPECT_NEAR(t.threshold, -0.2 * normal_quantile(0.1), 1e-13);
  EXPECT_NEAR(exact_size(s, t, GridFunction(op.grid()), 0.2), 0.1, 1e-14);
  EXPECT_EQ(t.provenance, Provenance::unregularized);
}

TEST(Unregularized, IncompatibleDeconvolutionExplodes) {
  const Scenario& s = deconv1();
  EXPECT_GE(norm(unregularized_test(s, 0.1, 0.1).probe), 1e3 * norm(s.phi));
  EXPECT_NEAR(std::exp(log_norm_unregularized_probe(s)), norm(s.op.pseudo_inverse_adjoint_solve(s.phi)),
              1e-10 * std::exp(log_norm_unregularized_probe(s)));
}

TEST(Unregularized, LogDomainPowerMatchesGridRoute) {
  const Scenario& s = deconv1();
  const double sigma = 1e-3;
  const MapTest t = unregularized_test(s, sigma, 0.1);
  EXPECT_NEAR(exact_power_unregularized(s, sigma, 0.1, s.u_coeffs), exact_size(s, t, s.u_dagger, sigma), 1e-10);
}

TEST(Eigenvector, Diagnostics) {
  const auto op = build_differentiation(32);
  std::vector<double> e(32, 0.0);
  e[2] = 1.0;
  const Scenario s = make_scenario(op, op.synthesize(e), GridFunction(op.grid()), 1.0, 2.0, 1.0);
  const PriorSpec prior = PriorSpec::power_law(1.0, 2.0);
  const auto g = eigenvector_diagnostic(s, prior, s.phi);
  ASSERT_TRUE(g.has_value());
  const double t3 = op.singular_values()[2];
  EXPECT_NEAR(*g, t3 * t3 * std::pow(t3, 4.0), 1e-15);

  // Two modes with equal tau^2 rho_k.
  const Scenario two = dense_scenario({1.0, 0.5, 0.25}, {0.6, 0.8, 0.0}, {0, 0, 0});
  const auto g2 = eigenvector_diagnostic(two, PriorSpec::diagonal({1.0, 4.0, 1.0}), two.phi);
  ASSERT_TRUE(g2.has_value());
  EXPECT_NEAR(*g2, 1.0, 1e-14);

  EXPECT_FALSE(eigenvector_diagnostic(deconv1(), prior, deconv1().phi).has_value());
}

TEST(Eigenvector, ClosedFormsAndTestEquality) {
  const auto op = build_differentiation(64);
  std::vector<double> e(64, 0.0);
  e[1] = 1.0;
  const Scenario s = make_scenario(op, op.synthesize(e), GridFunction(op.grid()), 1.0, 2.0, 1.0);
  const PriorSpec prior = PriorSpec::power_law(2.0, 2.0);
  const double g = *eigenvector_diagnostic(s, prior, s.phi);
  const RngPolicy policy{13};
  for (auto [sigma, alpha] : {std::pair{0.1, 0.1}, std::pair{0.01, 0.05}}) {
    const double k = g / (g + sigma * sigma);
    const GridFunction probe = map_probe(s, prior, sigma);
    const MapTest unreg = unregularized_test(s, sigma, alpha);
    EXPECT_LE(norm(op.adjoint_apply(probe) - k * GridFunction(s.phi)), 1e-10);
    EXPECT_NEAR(norm(probe), k * norm(unreg.probe), 1e-10);
    const GridFunction m0 = eigenvector_level_mean(s, prior, sigma, alpha);
    const MapTest map{probe, map_threshold(s, probe, m0), alpha, 2.0, Provenance::eigenvector_closed_form};
    EXPECT_NEAR(exact_size(s, map, GridFunction(op.grid()), sigma), alpha, 1e-10);
    for (int m = 0; m < 2000; ++m) {
      CounterRng rng = policy.stream(StreamTask::test_fixture, 4, m);
      const GridFunction y = sample_data(s, (m % 2) * sigma * 3.0 * GridFunction(s.phi), sigma, rng);
      ASSERT_EQ(map_decision(s, prior.with_mean(m0), y, sigma), unreg.decide(y));
    }
  }
}

TEST(MapTest, SigmaMustBePositive) {
  EXPECT_THROW(map_probe(deconv1(), PriorSpec::power_law(1.0, 2.0), 0.0), Error);
  EXPECT_THROW(PriorSpec::power_law(0.0, 2.0), Error);
}
