#include "rsw/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "rsw/error.hpp"

namespace rsw {

namespace detail {

namespace {
// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftwPlans {
  explicit FftwPlans(std::size_t n) : n(n) {
    std::lock_guard lock(fftw_planner_mutex());
    const int ni = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_1d(ni, real, cplx, flags);
    c2r = fftw_plan_dft_c2r_1d(ni, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
  }
  ~FftwPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  FftwPlans(const FftwPlans&) = delete;
  FftwPlans& operator=(const FftwPlans&) = delete;

  std::size_t n;
  fftw_plan r2c{};
  fftw_plan c2r{};
};

namespace {
std::shared_ptr<const FftwPlans> plans_for(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const FftwPlans>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const FftwPlans>(n);
  return slot;
}
}  // namespace

}  // namespace detail

SpectralPlan::SpectralPlan(Grid1D grid, double dealias_fraction)
    : grid_(grid), dealias_fraction_(dealias_fraction), plans_(detail::plans_for(grid.n())) {
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw ValidationError("dealias fraction must lie in (0, 1]");
  xi_.resize(modes());
  for (std::size_t m = 0; m < modes(); ++m) xi_[m] = grid_.wavenumber(m);
}

Spectrum SpectralPlan::forward(const Field& f) const {
  Spectrum out(modes());
  // r2c does not modify its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(f.data()), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Field SpectralPlan::inverse(Spectrum spectrum) const {
  Field out(n());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data());
  out *= 1.0 / static_cast<double>(n());
  return out;
}

Field SpectralPlan::deriv(const Field& f, int order) const {
  if (order < 1) throw ValidationError("derivative order must be positive");
  Spectrum s = forward(f);
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t m = 0; m < s.size(); ++m) {
    std::complex<double> factor = 1.0;
    for (int p = 0; p < order; ++p) factor *= i * xi_[m];
    s[m] *= factor;
  }
  if (order % 2 == 1) s.back() = 0.0;
  return inverse(std::move(s));
}

Field SpectralPlan::antideriv(const Field& f, double zero_mean_rel_tol) const {
  const double scale = f.max_abs();
  const double mean = f.mean();
  if (std::abs(mean) > zero_mean_rel_tol * scale)
    throw NonZeroMean("antiderivative of a field with nonzero mean " + std::to_string(mean));
  Spectrum s = forward(f);
  s[0] = 0.0;
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t m = 1; m < s.size(); ++m) s[m] /= i * xi_[m];
  s.back() = 0.0;
  return inverse(std::move(s));
}

Field SpectralPlan::invert_one_minus_mu3_dxx(const Field& f, double mu) const {
  if (mu < 0.0) throw ValidationError("invert_one_minus_mu3_dxx requires mu >= 0");
  if (mu == 0.0) return f;
  Spectrum s = forward(f);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] /= 1.0 + mu * xi_[m] * xi_[m] / 3.0;
  return inverse(std::move(s));
}

Field SpectralPlan::dealias(const Field& f) const {
  Spectrum s = forward(f);
  const double cutoff = dealias_fraction_ * xi_.back();
  double peak = 0.0, high = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    peak = std::max(peak, std::abs(s[m]));
    if (xi_[m] > cutoff) high = std::max(high, std::abs(s[m]));
  }
  // Already band-limited up to transform round-off: hand back the input so
  // that a second pass is an exact no-op.
  if (high <= 64.0 * std::numeric_limits<double>::epsilon() * peak) return f;
  for (std::size_t m = 0; m < s.size(); ++m)
    if (xi_[m] > cutoff) s[m] = 0.0;
  return inverse(std::move(s));
}

Field SpectralPlan::product(const Field& a, const Field& b) const { return dealias(a * b); }

Field SpectralPlan::bessel_potential(const Field& f, double s_order) const {
  if (s_order == 0.0) return f;
  Spectrum s = forward(f);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= std::pow(1.0 + xi_[m] * xi_[m], 0.5 * s_order);
  return inverse(std::move(s));
}

Field SpectralPlan::shift(const Field& f, double distance) const {
  if (distance == 0.0) return f;
  Spectrum s = forward(f);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= std::polar(1.0, -xi_[m] * distance);
  // On the grid the Nyquist mode only carries its cosine part.
  s.back() = s.back().real();
  return inverse(std::move(s));
}

double SpectralPlan::sobolev_norm(const Field& f, double s_order) const {
  Spectrum s = forward(f);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= std::pow(1.0 + xi_[m] * xi_[m], 0.5 * s_order);
  return std::sqrt(spectral_energy(s, grid_));
}

double SpectralPlan::spectral_l2_norm(const Field& f) const { return std::sqrt(spectral_energy(forward(f), grid_)); }

double spectral_energy(const Spectrum& s, const Grid1D& grid) {
  const std::size_t n = grid.n();
  double sum = std::norm(s.front()) + std::norm(s.back());
  for (std::size_t m = 1; m + 1 < s.size(); ++m) sum += 2.0 * std::norm(s[m]);
  return sum * grid.length() / (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace rsw
