#include "rsw/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "rsw/error.hpp"
#include "rsw/models.hpp"
#include "rsw/timeint.hpp"

namespace rsw {

std::string_view to_string(WaveModel model) { return model == WaveModel::Ostrovsky ? "ostrovsky" : "kdv"; }

Field slow_rhs(WaveModel model, const Field& k, const SpectralPlan& plan) {
  return model == WaveModel::Ostrovsky ? ostrovsky_rhs(ScalarWave{k}, plan) : kdv_rhs(ScalarWave{k}, plan);
}

SlowTrajectory solve_slow_trajectory(WaveModel model, const Field& k0, const std::vector<double>& taus, double dtau,
                                     const SpectralPlan& plan) {
  if (taus.empty() || taus.front() != 0.0) throw ValidationError("slow times must start at tau = 0");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] > taus[i - 1])) throw ValidationError("slow times must be strictly increasing");

  IfRk4Stepper stepper = model == WaveModel::Ostrovsky ? IfRk4Stepper::ostrovsky(plan) : IfRk4Stepper::kdv(plan);
  StepperConfig config{dtau, taus.back(), Scheme::IFRK4};
  ObservationSchedule schedule;
  schedule.snapshot_times = taus;
  auto step = [&stepper](const ScalarWave& k, double h) { return stepper(k, h); };
  const auto run = integrate(step, ScalarWave{k0}, config, schedule);
  if (run.states.size() != taus.size()) throw ValidationError("slow times are too close to be resolved");

  SlowTrajectory traj;
  traj.model = model;
  traj.taus = taus;
  for (const auto& s : run.states) traj.snapshots.push_back(s.k);
  return traj;
}

Field interpolate(const SlowTrajectory& traj, double tau) {
  if (traj.taus.empty()) throw ValidationError("empty slow trajectory");
  const double lo = traj.taus.front(), hi = traj.taus.back();
  if (tau < lo || tau > hi)
    throw SlowTimeOutOfRange("slow time " + std::to_string(tau) + " outside [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
  const auto it = std::lower_bound(traj.taus.begin(), traj.taus.end(), tau);
  const std::size_t i = static_cast<std::size_t>(it - traj.taus.begin());
  if (*it == tau) return traj.snapshots[i];
  const double w = (tau - traj.taus[i - 1]) / (traj.taus[i] - traj.taus[i - 1]);
  Field out = traj.snapshots[i - 1] * (1.0 - w);
  out.add_scaled(w, traj.snapshots[i]);
  return out;
}

double interpolation_error_estimate(const SlowTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.taus.size(); i += 2) {
    const double w = (traj.taus[i] - traj.taus[i - 1]) / (traj.taus[i + 1] - traj.taus[i - 1]);
    Field predicted = traj.snapshots[i - 1] * (1.0 - w);
    predicted.add_scaled(w, traj.snapshots[i + 1]);
    worst = std::max(worst, 0.25 * max_abs_diff(predicted, traj.snapshots[i]));
  }
  return worst;
}

double snapshot_residual(const SlowTrajectory& traj, const SpectralPlan& plan) {
  double worst = 0.0;
  const auto& grid = plan.grid();
  for (std::size_t i = 1; i + 1 < traj.taus.size(); ++i) {
    Field fd = traj.snapshots[i + 1] - traj.snapshots[i - 1];
    fd *= 1.0 / (traj.taus[i + 1] - traj.taus[i - 1]);
    const Field rhs = slow_rhs(traj.model, traj.snapshots[i], plan);
    const double scale = l2_norm(rhs, grid);
    const double diff = l2_norm(fd - rhs, grid);
    if (scale > 0.0)
      worst = std::max(worst, diff / scale);
    else if (diff > 0.0)
      worst = std::max(worst, diff);
  }
  return worst;
}

LeadingAnsatz leading_ansatz(const SlowTrajectory& traj, double mu, double t, const SpectralPlan& plan) {
  if (t == 0.0) return {traj.snapshots.front(), traj.snapshots.front()};
  const Field k = plan.shift(interpolate(traj, mu * t), t);
  return {k, k};
}

Field v_corrector(const SlowTrajectory& traj, const Field& v0, double t, double mu, const SpectralPlan& plan) {
  if (t == 0.0) return v0;
  Field out = v0 - plan.antideriv(traj.snapshots.front());
  out += plan.shift(plan.antideriv(interpolate(traj, mu * t)), t);
  return out;
}

namespace {

// k k_xi - (1/3) k_xixixi (+ d^{-1} k for Ostrovsky): moving forcing of the w- equation.
Field w_minus_bracket(WaveModel model, const Field& k, const SpectralPlan& plan) {
  Field out = plan.product(k, plan.deriv(k));
  out.add_scaled(-1.0 / 3.0, plan.deriv(k, 3));
  if (model == WaveModel::Ostrovsky) out += plan.antideriv(k);
  return out;
}

using cplx = std::complex<double>;

// Integrals over [0, 1] of e^{-i theta s} and s e^{-i theta s}.
void filon_kernels(double theta, cplx& j0, cplx& j1) {
  const cplx i(0.0, 1.0);
  if (std::abs(theta) < 0.1) {
    j0 = 0.0;
    j1 = 0.0;
    cplx power = 1.0;  // (-i theta)^n / n!
    for (int n = 0; n <= 10; ++n) {
      j0 += power / static_cast<double>(n + 1);
      j1 += power / static_cast<double>(n + 2);
      power *= -i * theta / static_cast<double>(n + 1);
    }
    return;
  }
  const cplx e = std::exp(-i * theta);
  j0 = (1.0 - e) / (i * theta);
  j1 = (e * (1.0 + i * theta) - 1.0) / (theta * theta);
}

}  // namespace

Field w_plus_bracket(WaveModel model, const Field& k, const SpectralPlan& plan) {
  Field out = 2.0 * slow_rhs(model, k, plan);
  out.add_scaled(3.0, plan.product(k, plan.deriv(k)));
  out.add_scaled(1.0 / 3.0, plan.deriv(k, 3));
  if (model == WaveModel::Ostrovsky) out -= plan.antideriv(k);
  return out;
}

CorrectorSeries solve_correctors(const SlowTrajectory& traj, const Field& v0, double mu, const SpectralPlan& plan,
                                 const CorrectorOptions& options) {
  if (!(mu > 0.0)) throw ValidationError("solve_correctors requires mu > 0");
  if (traj.snapshots.empty()) throw ValidationError("empty slow trajectory");
  const double residual = snapshot_residual(traj, plan);
  if (residual > options.residual_tol)
    throw NotAnOstrovskySolution("snapshots do not solve the " + std::string(to_string(traj.model)) +
                                 " equation (relative residual " + std::to_string(residual) + ")");

  const std::size_t modes = plan.modes();
  const cplx i(0.0, 1.0);
  const bool ostrovsky = traj.model == WaveModel::Ostrovsky;
  Spectrum g_hat(modes, 0.0);
  if (ostrovsky) g_hat = plan.forward(v0 - plan.antideriv(traj.snapshots.front()));

  CorrectorSeries out;
  Spectrum int_plus(modes, 0.0), int_minus(modes, 0.0);
  Spectrum prev_b, prev_c;
  double prev_s = 0.0;
  for (std::size_t n = 0; n < traj.taus.size(); ++n) {
    const Field& k = traj.snapshots[n];
    const Field bracket = w_plus_bracket(traj.model, k, plan);
    out.bracket_norm = std::max(out.bracket_norm, l2_norm(bracket, plan.grid()));
    Spectrum b = plan.forward(bracket);
    Spectrum c = plan.forward(w_minus_bracket(traj.model, k, plan));
    const double s = traj.taus[n] / mu;
    if (n > 0) {
      const double h = s - prev_s;
      for (std::size_t m = 0; m < modes; ++m) {
        // w+: omega = 0, plain trapezoid.
        int_plus[m] += 0.5 * h * (prev_b[m] + b[m]);
        const double omega = 2.0 * plan.wavenumber(m);
        cplx j0, j1;
        filon_kernels(omega * h, j0, j1);
        int_minus[m] += h * std::exp(-i * (omega * prev_s)) * (prev_c[m] * (j0 - j1) + c[m] * j1);
      }
    }
    Spectrum wp(modes), wm(modes);
    // The mean of g feeds a linear drift of the mean of w+-.
    wp[0] = -int_plus[0] + g_hat[0] * s;
    wm[0] = -int_minus[0] - g_hat[0] * s;
    for (std::size_t m = 1; m + 1 < modes; ++m) {
      const double xi = plan.wavenumber(m);
      const cplx fwd = std::exp(-i * (xi * s));
      const cplx bwd = std::exp(i * (xi * s));
      wp[m] = -fwd * int_plus[m] + g_hat[m] * (1.0 - fwd) / (i * xi);
      wm[m] = -bwd * int_minus[m] - g_hat[m] * (bwd - 1.0) / (i * xi);
    }
    out.times.push_back(s);
    out.w_plus.push_back(plan.inverse(std::move(wp)));
    out.w_minus.push_back(plan.inverse(std::move(wm)));
    prev_b = std::move(b);
    prev_c = std::move(c);
    prev_s = s;
  }
  return out;
}

}  // namespace rsw
