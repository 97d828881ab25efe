#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsw/core.hpp"
#include "rsw/spectral.hpp"

namespace rsw {

// ---------------------------------------------------------------------------
// Initial profiles
// ---------------------------------------------------------------------------

/// g(x) = amplitude * exp(-(x - center)^2 / (2 sigma^2)).
Field gaussian(const Grid1D& grid, double amplitude, double sigma, double center = 0.0);
/// sigma g'(x): first derivative of the Gaussian, scaled to unit size.
Field gaussian_d1(const Grid1D& grid, double amplitude, double sigma, double center = 0.0);
/// sigma^2 g''(x): second derivative of the Gaussian, scaled to unit size.
Field gaussian_d2(const Grid1D& grid, double amplitude, double sigma, double center = 0.0);
/// amplitude * sech^2((x - center) / width).
Field sech2(const Grid1D& grid, double amplitude, double width, double center = 0.0);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class StudyStatus { Ok, Degenerate, UnderResolved };
std::string_view to_string(StudyStatus status);

/// Acceptance band for a fitted slope.
struct SlopeBand {
  double target = 1.0;
  double lower = 0.75;
  double upper = 1.25;
  /// Slope must also exceed this (e.g. a naive estimate); -inf disables it.
  double strictly_above = -std::numeric_limits<double>::infinity();
};

struct StudyPoint {
  double mu = 0.0;
  double error = 0.0;
  double error_refined_n = std::numeric_limits<double>::quiet_NaN();
  double error_refined_dt = std::numeric_limits<double>::quiet_NaN();
  bool included = true;
  std::string note;
  /// (t, error at t) over the observation times.
  std::vector<std::pair<double, double>> series;
};

struct StudyReport {
  std::string name;
  std::vector<double> mu_values;
  std::vector<double> errors;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  SlopeBand band;
  bool pass = false;
  StudyStatus status = StudyStatus::Ok;
  double runtime_seconds = 0.0;
  std::vector<StudyPoint> points;
  std::string note =
      "error constants C of the theorems are unknowable; only the exponent (fitted slope) is an acceptance target";
};

/// Least-squares slope of log(error) against log(mu). Throws ValidationError
/// ("need ≥ 3 mu values") when fewer than three points are given.
double fit_slope(const std::vector<double>& mu_values, const std::vector<double>& errors);

/// Computes one StudyPoint per mu (optionally on `threads` workers, results
/// merged in input order), applies refinement and monotonicity screening, fits
/// and grades the slope.
struct ErrorStudyOptions {
  SlopeBand band;
  int threads = 1;
  /// Relative change allowed under n-doubling / dt-halving.
  double refinement_tol = 0.05;
  /// Errors at or below this are round-off: the study is degenerate.
  double degenerate_below = 1e-13;
};

StudyReport run_error_study(const std::string& name, const std::vector<double>& mu_values,
                            const std::function<StudyPoint(double mu)>& point_fn, const ErrorStudyOptions& options);

// ---------------------------------------------------------------------------
// Approximation studies
// ---------------------------------------------------------------------------

struct ApproximationStudyConfig {
  RegimeTag regime = RegimeTag::KdV;  ///< Poin, Ost or KdV
  std::vector<double> mu_values{0.2, 0.1, 0.05, 0.025};
  double T = 1.0;
  std::size_t n = 512;
  double length = 128.0;
  double cfl = 0.5;  ///< dt = cfl * dx, rounded down to divide the horizon
  double sigma = 2.0;
  double amplitude = 1.0;
  int observations = 64;
  bool refinement_checks = true;
  int threads = 1;
};

/// Default acceptance band of each regime: KdV 1 +- 0.25, Ost 1 +- 0.3,
/// Poin >= 0.7 and > 0.5 (target 3/4).
SlopeBand default_band(RegimeTag regime);

/// Sup-norm error (max over observation times) between the reference
/// Boussinesq model and its approximation at horizon T/sqrt(mu) (Poin, Ost)
/// or T/mu (KdV), for one mu.
StudyPoint approximation_error(const ApproximationStudyConfig& config, double mu, std::size_t n, double dt_factor);

StudyReport approximation_study(const ApproximationStudyConfig& config, const SlopeBand& band);
inline StudyReport approximation_study(const ApproximationStudyConfig& config) {
  return approximation_study(config, default_band(config.regime));
}

// ---------------------------------------------------------------------------
// Model-reduction residuals
// ---------------------------------------------------------------------------

enum class ReductionPair { GNToBouss, BoussToWeak, GNMediumToWeak };
std::string_view to_string(ReductionPair pair);
std::optional<ReductionPair> parse_reduction_pair(std::string_view text);

struct ReductionStudyConfig {
  ReductionPair pair = ReductionPair::GNToBouss;
  std::vector<double> mu_values{0.2, 0.1, 0.05, 0.025};
  std::size_t n = 256;
  double length = 64.0;
  /// Scales every field of the state family; 0 gives the rest state.
  double amplitude = 1.0;
  bool refinement_checks = true;
};

/// GN -> Bouss and Bouss -> weak: 2 +- 0.3. GNmedium -> weak: 1.5 +- 0.3.
SlopeBand default_band(ReductionPair pair);

/// Sup-norm of the difference of the two right-hand sides on the fixed state family.
double reduction_residual(ReductionPair pair, double mu, std::size_t n, double length, double amplitude = 1.0);

StudyReport reduction_residual_study(const ReductionStudyConfig& config, const SlopeBand& band);
inline StudyReport reduction_residual_study(const ReductionStudyConfig& config) {
  return reduction_residual_study(config, default_band(config.pair));
}

// ---------------------------------------------------------------------------
// Dispersive decay of the linear semigroup
// ---------------------------------------------------------------------------

struct DecayReport {
  std::vector<double> times;
  std::vector<double> linf;  ///< max |u(t)|
  double exponent = std::numeric_limits<double>::quiet_NaN();  ///< p in |u|_inf ~ t^{-p}
  StudyStatus status = StudyStatus::Ok;
};

/// Evolves state0 exactly and fits the decay exponent of max|u| over t_grid.
/// Throws DomainTooSmall if L < 4 max(t_grid) or the data do not vanish
/// (below 1e-12 relative) at the domain edge.
DecayReport decay_study(const LinearState& state0, const std::vector<double>& t_grid, const SpectralPlan& plan);

/// n log-spaced times in [t0, t1].
std::vector<double> log_spaced(double t0, double t1, std::size_t n);

}  // namespace rsw
