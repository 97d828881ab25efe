#pragma once

#include <string_view>
#include <vector>

#include "rsw/core.hpp"
#include "rsw/spectral.hpp"

namespace rsw {

/// Slow-time equation obeyed by the modulated wave k(xi, tau).
enum class WaveModel { Ostrovsky, KdV };

std::string_view to_string(WaveModel model);

/// Snapshots k(., tau_i) of an Ostrovsky or KdV solution.
struct SlowTrajectory {
  WaveModel model = WaveModel::Ostrovsky;
  std::vector<double> taus;
  std::vector<Field> snapshots;
};

/// Integrates the slow equation from k0 with IFRK4 at step dtau, storing k at
/// each of the requested taus (which must start at 0 and increase).
SlowTrajectory solve_slow_trajectory(WaveModel model, const Field& k0, const std::vector<double>& taus, double dtau,
                                     const SpectralPlan& plan);

/// k(., tau) by linear interpolation between snapshots. Throws
/// SlowTimeOutOfRange outside [taus.front(), taus.back()].
Field interpolate(const SlowTrajectory& traj, double tau);

/// Estimated max error of linear interpolation in tau: every other snapshot
/// is predicted from its neighbours and the discrepancy scaled by 1/4.
double interpolation_error_estimate(const SlowTrajectory& traj);

/// Right-hand side of the slow equation at k.
Field slow_rhs(WaveModel model, const Field& k, const SpectralPlan& plan);

/// Largest relative L2 mismatch between centered tau-differences of the
/// snapshots and the slow right-hand side.
double snapshot_residual(const SlowTrajectory& traj, const SpectralPlan& plan);

struct LeadingAnsatz {
  Field zeta, u;
};

/// zeta_app = u_app = k(x - t, mu t).
LeadingAnsatz leading_ansatz(const SlowTrajectory& traj, double mu, double t, const SpectralPlan& plan);

/// v(t, x) = v0(x) - d^{-1} k0(x) + (d^{-1} k)(x - t, mu t).
Field v_corrector(const SlowTrajectory& traj, const Field& v0, double t, double mu, const SpectralPlan& plan);

/// Moving forcing of the w+ equation on one snapshot:
/// 2 k_tau + 3 k k_xi + (1/3) k_xixixi (- d^{-1} k for Ostrovsky), with k_tau from slow_rhs.
Field w_plus_bracket(WaveModel model, const Field& k, const SpectralPlan& plan);

struct CorrectorSeries {
  std::vector<double> times;  ///< t_i = tau_i / mu
  std::vector<Field> w_plus, w_minus;
  double bracket_norm = 0.0;  ///< max over snapshots of |w_plus_bracket|_2
};

struct CorrectorOptions {
  /// Relative tolerance for the snapshot residual check.
  double residual_tol = 5e-2;
};

/// Solves the transport equations for w+- = zeta_(1) +- u_(1) with zero
/// initial data. The homogeneous part uses exact characteristics; the Duhamel
/// integral of each moving forcing is integrated exactly against e^{-i omega s}
/// for amplitudes linear between snapshots. For Ostrovsky, v0 enters through
/// g = v0 - d^{-1} k0; for KdV it is ignored.
/// Throws NotAnOstrovskySolution when the snapshots do not solve the slow equation.
CorrectorSeries solve_correctors(const SlowTrajectory& traj, const Field& v0, double mu, const SpectralPlan& plan,
                                 const CorrectorOptions& options = {});

}  // namespace rsw
