#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsw/core.hpp"
#include "rsw/error.hpp"
#include "rsw/models.hpp"
#include "rsw/spectral.hpp"
#include "rsw/state_ops.hpp"

namespace rsw {

enum class Scheme { RK4, IFRK4 };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view text);

struct StepperConfig {
  double dt = 0.0;
  double t_end = 0.0;
  Scheme scheme = Scheme::RK4;
  /// Largest |dt xi_max^3 / 6| accepted for explicit stepping of a dispersive equation.
  double cfl_guard = 2.5;
};

/// Throws ConfigError unless dt > 0 and t_end >= 0 are finite.
void validate_stepper(const StepperConfig& config);

/// For KdV/Ostrovsky: explicit RK4 is only allowed below the dispersive CFL
/// guard. Throws ConfigError naming IFRK4 otherwise.
void check_dispersive_stability(const StepperConfig& config, const SpectralPlan& plan);

/// Classical four-stage Runge-Kutta step. Throws NonFinite if a stage is not finite.
template <class S, class Rhs>
S rk4_step(Rhs&& rhs, const S& y, double dt) {
  auto checked = [](S s, const char* stage) {
    if (!all_finite(s)) throw NonFinite(std::string("non-finite values in RK4 stage ") + stage);
    return s;
  };
  const S k1 = checked(rhs(y), "1");
  S y2 = y;
  add_scaled(y2, 0.5 * dt, k1);
  const S k2 = checked(rhs(y2), "2");
  S y3 = y;
  add_scaled(y3, 0.5 * dt, k2);
  const S k3 = checked(rhs(y3), "3");
  S y4 = y;
  add_scaled(y4, dt, k3);
  const S k4 = checked(rhs(y4), "4");

  S out = y;
  add_scaled(out, dt / 6.0, k1);
  add_scaled(out, dt / 3.0, k2);
  add_scaled(out, dt / 3.0, k3);
  add_scaled(out, dt / 6.0, k4);
  return checked(std::move(out), "update");
}

using NonlinearTerm = std::function<Field(const Field&)>;

/// Integrating-factor RK4 for k_t = L k + N(k) with L diagonal in Fourier
/// space. Exact when N = 0.
ScalarWave ifrk4_step(const LinearSymbol& symbol, const NonlinearTerm& nonlinear, const ScalarWave& k, double dt,
                      const SpectralPlan& plan);

/// Same scheme with the exponentials cached for the last dt used.
class IfRk4Stepper {
 public:
  IfRk4Stepper(LinearSymbol symbol, NonlinearTerm nonlinear, SpectralPlan plan);

  ScalarWave operator()(const ScalarWave& k, double dt);

  /// Stepper for the KdV or Ostrovsky equation.
  static IfRk4Stepper kdv(const SpectralPlan& plan);
  static IfRk4Stepper ostrovsky(const SpectralPlan& plan);

 private:
  void prepare(double dt);

  LinearSymbol symbol_;
  NonlinearTerm nonlinear_;
  SpectralPlan plan_;
  double cached_dt_ = 0.0;
  Spectrum half_, full_;
};

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct ObservationSchedule {
  /// Observer spacing; 0 means only t = 0 and t = t_end.
  double every = 0.0;
  /// Extra times at which the state is stored.
  std::vector<double> snapshot_times;
  /// Also call the observer at the snapshot times.
  bool observe_snapshots = false;
};

template <class S>
struct Trajectory {
  std::vector<double> times;
  std::vector<S> states;

  const S& final_state() const { return states.back(); }
  /// Stored state at time t (exact match). Throws ValidationError otherwise.
  const S& at(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == t) return states[i];
    throw ValidationError("no stored state at t=" + std::to_string(t));
  }
};

namespace detail {

struct Event {
  double t;
  bool observe;
  bool store;
};

std::vector<Event> build_events(double t_end, const ObservationSchedule& schedule);

}  // namespace detail

/// Advances y0 to config.t_end with step(state, h) -> state. Observation and
/// snapshot times are hit exactly by shortening the step that would cross
/// them. The observer sees t = 0, every, 2 every, ..., t_end (and the
/// snapshot times if requested). Numerical errors
/// are re-raised as IntegrationError carrying the failing time.
template <class S, class Step>
Trajectory<S> integrate(Step&& step, S y0, const StepperConfig& config, const ObservationSchedule& schedule = {},
                        const std::function<void(double, const S&)>& observer = {}) {
  validate_stepper(config);
  Trajectory<S> traj;
  const auto events = detail::build_events(config.t_end, schedule);
  double t = 0.0;
  S y = std::move(y0);
  for (const auto& ev : events) {
    while (t < ev.t) {
      const double remaining = ev.t - t;
      // Absorb a round-off sliver into the current step instead of taking a tiny one.
      const bool last = remaining <= config.dt * (1.0 + 1e-9);
      const double h = last ? remaining : config.dt;
      try {
        y = step(y, h);
      } catch (const IntegrationError&) {
        throw;
      } catch (const NumericalError& e) {
        throw IntegrationError(t, e.what());
      }
      t = last ? ev.t : t + h;
    }
    if (ev.observe && observer) observer(ev.t, y);
    if (ev.store) {
      traj.times.push_back(ev.t);
      traj.states.push_back(y);
    }
  }
  return traj;
}

/// RK4 on a right-hand side: wraps rk4_step for integrate().
template <class Rhs>
auto rk4_stepper(Rhs rhs) {
  return [rhs = std::move(rhs)](const auto& y, double h) { return rk4_step(rhs, y, h); };
}

}  // namespace rsw
