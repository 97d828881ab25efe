#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "rsw/core.hpp"

namespace rsw {

/// Non-negative half of the discrete Fourier spectrum (n/2 + 1 modes) of a
/// real field, unnormalized: F_m = sum_j f_j exp(-2 pi i m j / n).
using Spectrum = std::vector<std::complex<double>>;

namespace detail {
struct FftwPlans;
}

/// Pseudospectral calculus on a periodic Grid1D.
///
/// The plan is immutable after construction and may be shared between threads.
/// The Nyquist mode of every odd-order operator is set to zero so that real
/// input always maps to real output.
class SpectralPlan {
 public:
  explicit SpectralPlan(Grid1D grid, double dealias_fraction = 2.0 / 3.0);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t n() const noexcept { return grid_.n(); }
  std::size_t modes() const noexcept { return grid_.n() / 2 + 1; }
  double wavenumber(std::size_t m) const noexcept { return xi_[m]; }
  const std::vector<double>& wavenumbers() const noexcept { return xi_; }
  double dealias_fraction() const noexcept { return dealias_fraction_; }

  Spectrum forward(const Field& f) const;
  /// Inverse transform including the 1/n normalization.
  Field inverse(Spectrum spectrum) const;

  /// d^order f / dx^order.
  Field deriv(const Field& f, int order = 1) const;

  /// Zero-mean antiderivative. Throws NonZeroMean when |mean(f)| exceeds
  /// zero_mean_rel_tol * max|f|.
  Field antideriv(const Field& f, double zero_mean_rel_tol = 1e-10) const;

  /// Solves (1 - mu/3 d_x^2) g = f.
  Field invert_one_minus_mu3_dxx(const Field& f, double mu) const;

  /// Zeroes every mode with |xi| > dealias_fraction * xi_nyquist. Idempotent bit for bit.
  Field dealias(const Field& f) const;
  /// dealias(a * b)
  Field product(const Field& a, const Field& b) const;

  /// Bessel potential (1 - d_x^2)^{s/2}.
  Field bessel_potential(const Field& f, double s) const;

  /// Translate: returns f(x - distance) using the exact spectral phase.
  Field shift(const Field& f, double distance) const;

  /// Sobolev norm with weight (1 + xi^2)^s.
  double sobolev_norm(const Field& f, double s) const;
  /// L2 norm computed from the spectrum (Parseval).
  double spectral_l2_norm(const Field& f) const;

 private:
  Grid1D grid_;
  double dealias_fraction_;
  std::vector<double> xi_;
  std::shared_ptr<const detail::FftwPlans> plans_;
};

/// Sum of |F_m|^2 over the full (two-sided) spectrum, scaled so that the
/// result equals the integral of f^2 over one period.
double spectral_energy(const Spectrum& spectrum, const Grid1D& grid);

}  // namespace rsw
