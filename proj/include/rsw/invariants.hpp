#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rsw/core.hpp"
#include "rsw/models.hpp"
#include "rsw/spectral.hpp"
#include "rsw/timeint.hpp"
#include "rsw/wkb.hpp"

namespace rsw {

/// Per-snapshot diagnostics. Quantities that do not apply to a model are NaN.
struct Observables {
  static constexpr double none = std::numeric_limits<double>::quiet_NaN();

  double mass = 0.0;    ///< integral of the primary field (zeta, or k)
  double l2 = 0.0;      ///< L2 norm of the whole state
  double linf = 0.0;    ///< max |field| over the whole state
  double energy = 0.0;  ///< model energy (see observe())
  double w_max = none;         ///< max |W| or |V_sharp|
  double geo_residual = none;  ///< |zeta - v_x|_2
  double mean = none;          ///< mean of the primary field
};

/// KdV/Ostrovsky: energy is the Hamiltonian
/// int(-k^3/4 + k_xi^2/12) (- int (d^{-1} k)^2 / 4 for Ostrovsky).
Observables observe(const ScalarWave& k, WaveModel model, const SpectralPlan& plan);
/// Linear system: energy is int(zeta^2 + u^2 + v^2) / 2.
Observables observe_linear(const LinearState& s, const SpectralPlan& plan);
/// Weak-rotation Boussinesq: energy is the symmetrizer energy at s = 0.
Observables observe(const LinearState& s, const ModelContext& ctx);
Observables observe(const BoussinesqState& s, const ModelContext& ctx);
Observables observe(const GNState& s, const ModelContext& ctx);
Observables observe(const GNMediumState& s, const ModelContext& ctx);

/// Extra columns that can be requested besides t, mass, l2, linf, energy.
enum class Extra { WMax, GeoResidual, Mean };
std::string column_name(Extra e);
/// Parses "w_max", "geo_residual" or "mean". Throws ConfigError otherwise.
Extra parse_extra(const std::string& name);

struct DriftTolerances {
  double mass_abs = 1e-12;  ///< scaled by n * max(1, |mass(0)|)
  double l2_rel = 1e-6;     ///< only checked when the model conserves L2
  double mean_abs = 1e-12;  ///< scaled by max(1, linf(0))
  double geo_abs = 1e-10;
};

struct InvariantRow {
  double t = 0.0;
  Observables values;
};

/// Accumulates diagnostics during a run and flags drift.
class InvariantMonitor {
 public:
  InvariantMonitor(std::size_t n, bool conserves_l2, DriftTolerances tol = {});

  void record(double t, const Observables& o);

  const std::vector<InvariantRow>& rows() const noexcept { return rows_; }
  /// Human-readable description of every tolerance exceeded so far.
  std::vector<std::string> drift_flags() const;
  double max_mass_drift() const;
  double max_l2_rel_drift() const;

 private:
  std::size_t n_;
  bool conserves_l2_;
  DriftTolerances tol_;
  std::vector<InvariantRow> rows_;
};

/// Diagnostics of every stored state of a trajectory.
template <class S, class ObserveFn>
InvariantMonitor monitor_invariants(const Trajectory<S>& traj, ObserveFn&& observe_fn, std::size_t n,
                                    bool conserves_l2, DriftTolerances tol = {}) {
  InvariantMonitor monitor(n, conserves_l2, tol);
  for (std::size_t i = 0; i < traj.times.size(); ++i) monitor.record(traj.times[i], observe_fn(traj.states[i]));
  return monitor;
}

}  // namespace rsw
