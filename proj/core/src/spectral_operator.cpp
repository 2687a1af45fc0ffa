#include "maptest/spectral_operator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "maptest/error.hpp"

namespace maptest {

namespace {

// The FFTW planner is not re-entrant; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_tau(std::span<const double> tau, std::size_t n) {
  if (tau.size() != n)
    fail(ErrorCode::dimension_mismatch,
         "expected " + std::to_string(n) + " singular values, got " + std::to_string(tau.size()));
  for (double t : tau)
    if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorCode::invalid_argument, "singular values must be finite and >= 0");
}

}  // namespace

const char* to_string(Basis basis) {
  switch (basis) {
    case Basis::periodic_fourier: return "periodic_fourier";
    case Basis::odd_sine: return "odd_sine";
    case Basis::dense: return "dense";
  }
  return "unknown";
}

std::size_t periodic_frequency(std::size_t index, std::size_t n) {
  if (index + 1 == n) return n / 2;
  return (index + 1) / 2;
}

struct SpectralOperator::Transform {
  Basis basis;
  std::size_t n;
  double h;
  double length;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> q;

  Transform(Basis b, const Grid& grid) : basis(b), n(grid.size()), h(grid.spacing()), length(grid.b() - grid.a()) {
    if (basis == Basis::dense) return;
    std::vector<double> re(n);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (basis == Basis::periodic_fourier) {
      std::vector<fftw_complex> cx(n / 2 + 1);
      forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(), cx.data(), flags);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), cx.data(), re.data(), flags);
    } else {
      std::vector<double> out(n);
      forward = fftw_plan_r2r_1d(static_cast<int>(n), re.data(), out.data(), FFTW_RODFT00, flags);
    }
    if (!forward) fail(ErrorCode::invalid_argument, "FFTW planning failed for N=" + std::to_string(n));
  }

  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  ~Transform() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  void analyze(const double* f, double* a) const {
    switch (basis) {
      case Basis::periodic_fourier: {
        std::vector<std::complex<double>> cx(n / 2 + 1);
        std::vector<double> in(f, f + n);
        fftw_execute_dft_r2c(forward, in.data(), reinterpret_cast<fftw_complex*>(cx.data()));
        const double s0 = std::sqrt(h / static_cast<double>(n));
        const double s1 = std::sqrt(2.0 * h / static_cast<double>(n));
        a[0] = s0 * cx[0].real();
        for (std::size_t k = 1; k < n / 2; ++k) {
          a[2 * k - 1] = s1 * cx[k].real();
          a[2 * k] = s1 * cx[k].imag();
        }
        a[n - 1] = s0 * cx[n / 2].real();
        break;
      }
      case Basis::odd_sine: {
        std::vector<double> in(f, f + n);
        fftw_execute_r2r(forward, in.data(), a);
        const double s = 0.5 * h * std::sqrt(2.0 / length);
        for (std::size_t k = 0; k < n; ++k) a[k] *= s;
        break;
      }
      case Basis::dense: {
        const double s = std::sqrt(h);
        for (std::size_t k = 0; k < n; ++k) {
          double acc = 0.0;
          const double* col = q.data() + k * n;
          for (std::size_t j = 0; j < n; ++j) acc += col[j] * f[j];
          a[k] = s * acc;
        }
        break;
      }
    }
  }

  void synthesize(const double* a, double* f) const {
    switch (basis) {
      case Basis::periodic_fourier: {
        std::vector<std::complex<double>> cx(n / 2 + 1);
        const double nn = static_cast<double>(n);
        const double s0 = 1.0 / (nn * std::sqrt(h / nn));
        const double s1 = 1.0 / (nn * std::sqrt(2.0 * h / nn));
        cx[0] = {s0 * a[0], 0.0};
        for (std::size_t k = 1; k < n / 2; ++k) cx[k] = {s1 * a[2 * k - 1], s1 * a[2 * k]};
        cx[n / 2] = {s0 * a[n - 1], 0.0};
        fftw_execute_dft_c2r(backward, reinterpret_cast<fftw_complex*>(cx.data()), f);
        break;
      }
      case Basis::odd_sine: {
        std::vector<double> in(a, a + n);
        fftw_execute_r2r(forward, in.data(), f);
        const double s = 0.5 * std::sqrt(2.0 / length);
        for (std::size_t k = 0; k < n; ++k) f[k] *= s;
        break;
      }
      case Basis::dense: {
        const double s = 1.0 / std::sqrt(h);
        std::fill(f, f + n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
          const double ak = s * a[k];
          const double* col = q.data() + k * n;
          for (std::size_t j = 0; j < n; ++j) f[j] += col[j] * ak;
        }
        break;
      }
    }
  }
};

SpectralOperator::SpectralOperator(Grid grid, std::shared_ptr<const Transform> transform, std::vector<double> tau,
                                   double norm_factor)
    : grid_(grid), transform_(std::move(transform)), tau_(std::move(tau)), norm_factor_(norm_factor) {
  check_tau(tau_, grid_.size());
  norm_ = *std::max_element(tau_.begin(), tau_.end());
}

SpectralOperator SpectralOperator::periodic_fourier(const Grid& grid, std::vector<double> tau, double norm_factor) {
  if (grid.size() % 2 != 0)
    fail(ErrorCode::invalid_argument, "periodic_fourier needs even N, got " + std::to_string(grid.size()));
  if (grid.rule() != NodeRule::periodic) fail(ErrorCode::invalid_argument, "periodic_fourier needs a periodic grid");
  check_tau(tau, grid.size());
  return SpectralOperator(grid, std::make_shared<const Transform>(Basis::periodic_fourier, grid), std::move(tau),
                          norm_factor);
}

SpectralOperator SpectralOperator::odd_sine(const Grid& grid, std::vector<double> tau, double norm_factor) {
  if (grid.rule() != NodeRule::interior) fail(ErrorCode::invalid_argument, "odd_sine needs an interior grid");
  check_tau(tau, grid.size());
  return SpectralOperator(grid, std::make_shared<const Transform>(Basis::odd_sine, grid), std::move(tau), norm_factor);
}

SpectralOperator SpectralOperator::dense(const Grid& grid, std::vector<double> basis_col_major, std::vector<double> tau,
                                         double norm_factor) {
  const std::size_t n = grid.size();
  if (basis_col_major.size() != n * n)
    fail(ErrorCode::dimension_mismatch, "dense basis needs " + std::to_string(n * n) + " entries, got " +
                                            std::to_string(basis_col_major.size()));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) d += basis_col_major[a * n + j] * basis_col_major[b * n + j];
      if (std::abs(d - (a == b ? 1.0 : 0.0)) > 1e-10)
        fail(ErrorCode::invalid_argument, "dense basis is not orthonormal");
    }
  check_tau(tau, n);
  auto t = std::make_shared<Transform>(Basis::dense, grid);
  t->q = std::move(basis_col_major);
  return SpectralOperator(grid, std::move(t), std::move(tau), norm_factor);
}

Basis SpectralOperator::basis() const { return transform_->basis; }

SpectralOperator SpectralOperator::with_singular_values(std::vector<double> tau, double norm_factor) const {
  check_tau(tau, size());
  return SpectralOperator(grid_, transform_, std::move(tau), norm_factor);
}

std::vector<double> SpectralOperator::analyze(const GridFunction& f) const {
  require_same_grid(grid_, f.grid(), "analyze");
  std::vector<double> a(size());
  transform_->analyze(f.values().data(), a.data());
  return a;
}

void SpectralOperator::analyze(std::span<const double> values, std::span<double> coeffs) const {
  if (values.size() != size() || coeffs.size() != size())
    fail(ErrorCode::dimension_mismatch, "analyze: expected N=" + std::to_string(size()) + ", got " +
                                            std::to_string(values.size()) + "/" + std::to_string(coeffs.size()));
  transform_->analyze(values.data(), coeffs.data());
}

GridFunction SpectralOperator::synthesize(std::span<const double> coeffs) const {
  if (coeffs.size() != size())
    fail(ErrorCode::dimension_mismatch,
         "synthesize: expected N=" + std::to_string(size()) + ", got " + std::to_string(coeffs.size()));
  GridFunction f(grid_);
  transform_->synthesize(coeffs.data(), f.values().data());
  return f;
}

GridFunction SpectralOperator::apply(const GridFunction& f) const {
  auto a = analyze(f);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= tau_[k];
  return synthesize(a);
}

GridFunction SpectralOperator::adjoint_apply(const GridFunction& g) const { return apply(g); }

void SpectralOperator::tstar_t_power_coeffs(double s, std::span<double> a) const {
  if (a.size() != size())
    fail(ErrorCode::dimension_mismatch,
         "tstar_t_power: expected N=" + std::to_string(size()) + ", got " + std::to_string(a.size()));
  if (s == 0.0) return;
  if (s < 0.0) {
    const double scale = euclidean_norm(a);
    for (std::size_t k = 0; k < a.size(); ++k)
      if (tau_[k] == 0.0) {
        if (std::abs(a[k]) > 1e-10 * scale)
          fail(ErrorCode::null_mode_division, "mode " + std::to_string(k) + " has tau = 0 but carries mass");
        a[k] = 0.0;
      }
  }
  for (std::size_t k = 0; k < a.size(); ++k)
    if (tau_[k] != 0.0) a[k] *= std::pow(tau_[k], 2.0 * s);
    else a[k] = 0.0;
}

GridFunction SpectralOperator::tstar_t_power(double s, const GridFunction& f) const {
  auto a = analyze(f);
  tstar_t_power_coeffs(s, a);
  return synthesize(a);
}

GridFunction SpectralOperator::pseudo_inverse_adjoint_solve(const GridFunction& phi, double rel_cutoff) const {
  if (!(rel_cutoff >= 0.0 && rel_cutoff < 1.0))
    fail(ErrorCode::invalid_argument, "rel_cutoff must lie in [0,1)");
  const double cut = rel_cutoff * norm_;
  auto a = analyze(phi);
  bool any = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (tau_[k] > cut && tau_[k] > 0.0) {
      a[k] /= tau_[k];
      any = true;
    } else {
      a[k] = 0.0;
    }
  }
  if (!any) fail(ErrorCode::empty_spectrum, "no singular value above the cutoff");
  return synthesize(a);
}

}  // namespace maptest
