#include "rsw/timeint.hpp"

#include <cmath>
#include <string>

namespace rsw {

std::string_view to_string(Scheme scheme) { return scheme == Scheme::RK4 ? "rk4" : "ifrk4"; }

std::optional<Scheme> parse_scheme(std::string_view text) {
  if (text == "rk4" || text == "RK4") return Scheme::RK4;
  if (text == "ifrk4" || text == "IFRK4") return Scheme::IFRK4;
  return std::nullopt;
}

void validate_stepper(const StepperConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ConfigError("stepper.dt must be positive");
  if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) throw ConfigError("stepper.t_end must be >= 0");
}

void check_dispersive_stability(const StepperConfig& config, const SpectralPlan& plan) {
  if (config.scheme != Scheme::RK4) return;
  const double xi = plan.grid().nyquist();
  const double stiffness = std::abs(config.dt * xi * xi * xi / 6.0);
  if (stiffness > config.cfl_guard)
    throw ConfigError("explicit RK4 unstable for this dispersive equation: |dt xi_max^3 / 6| = " +
                      std::to_string(stiffness) + " > cfl_guard = " + std::to_string(config.cfl_guard) +
                      "; use stepper.scheme = ifrk4");
}

// ---------------------------------------------------------------------------

namespace {

void require_zero_mean(const LinearSymbol& symbol, const ScalarWave& k) {
  if (symbol.requires_zero_mean && !k.antiderivative_defined())
    throw NonZeroMean("IFRK4 with an antiderivative term requires zero-mean data (mean " +
                      std::to_string(k.k.mean()) + ")");
}

ScalarWave lawson_step(const Spectrum& half, const Spectrum& full, const NonlinearTerm& nonlinear,
                       const ScalarWave& k, double dt, const SpectralPlan& plan) {
  const std::size_t m = plan.modes();
  auto n_hat = [&](const Spectrum& v) {
    Spectrum out = plan.forward(nonlinear(plan.inverse(v)));
    for (auto& c : out) c *= dt;
    return out;
  };
  const Spectrum v = plan.forward(k.k);
  Spectrum w(m);

  const Spectrum a = n_hat(v);
  for (std::size_t j = 0; j < m; ++j) w[j] = half[j] * (v[j] + 0.5 * a[j]);
  const Spectrum b = n_hat(w);
  for (std::size_t j = 0; j < m; ++j) w[j] = half[j] * v[j] + 0.5 * b[j];
  const Spectrum c = n_hat(w);
  for (std::size_t j = 0; j < m; ++j) w[j] = full[j] * v[j] + half[j] * c[j];
  const Spectrum d = n_hat(w);

  for (std::size_t j = 0; j < m; ++j)
    w[j] = full[j] * v[j] + (full[j] * a[j] + 2.0 * half[j] * (b[j] + c[j]) + d[j]) / 6.0;
  ScalarWave out{plan.inverse(std::move(w))};
  if (!out.k.all_finite()) throw NonFinite("non-finite values in IFRK4 step");
  return out;
}

void exponentials(const LinearSymbol& symbol, double dt, Spectrum& half, Spectrum& full) {
  const std::size_t m = symbol.multipliers.size();
  half.resize(m);
  full.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    half[j] = std::exp(symbol.multipliers[j] * (0.5 * dt));
    full[j] = std::exp(symbol.multipliers[j] * dt);
  }
}

}  // namespace

ScalarWave ifrk4_step(const LinearSymbol& symbol, const NonlinearTerm& nonlinear, const ScalarWave& k, double dt,
                      const SpectralPlan& plan) {
  require_zero_mean(symbol, k);
  Spectrum half, full;
  exponentials(symbol, dt, half, full);
  return lawson_step(half, full, nonlinear, k, dt, plan);
}

IfRk4Stepper::IfRk4Stepper(LinearSymbol symbol, NonlinearTerm nonlinear, SpectralPlan plan)
    : symbol_(std::move(symbol)), nonlinear_(std::move(nonlinear)), plan_(std::move(plan)) {
  if (symbol_.multipliers.size() != plan_.modes()) throw ValidationError("symbol size does not match the grid");
}

void IfRk4Stepper::prepare(double dt) {
  if (dt == cached_dt_ && !half_.empty()) return;
  exponentials(symbol_, dt, half_, full_);
  cached_dt_ = dt;
}

ScalarWave IfRk4Stepper::operator()(const ScalarWave& k, double dt) {
  require_zero_mean(symbol_, k);
  prepare(dt);
  return lawson_step(half_, full_, nonlinear_, k, dt, plan_);
}

IfRk4Stepper IfRk4Stepper::kdv(const SpectralPlan& plan) {
  return IfRk4Stepper(kdv_symbol(plan), [plan](const Field& k) { return long_wave_nonlinearity(k, plan); }, plan);
}

IfRk4Stepper IfRk4Stepper::ostrovsky(const SpectralPlan& plan) {
  return IfRk4Stepper(ostrovsky_symbol(plan), [plan](const Field& k) { return long_wave_nonlinearity(k, plan); },
                      plan);
}

// ---------------------------------------------------------------------------

namespace detail {

std::vector<Event> build_events(double t_end, const ObservationSchedule& schedule) {
  if (schedule.every < 0.0 || !std::isfinite(schedule.every)) throw ConfigError("output.every must be >= 0");
  const double tol = 1e-12 * std::max(1.0, t_end);
  std::vector<Event> events{{0.0, true, true}};
  if (schedule.every > 0.0) {
    for (std::size_t j = 1;; ++j) {
      const double t = static_cast<double>(j) * schedule.every;
      if (t >= t_end - tol) break;
      events.push_back({t, true, false});
    }
  }
  for (double ts : schedule.snapshot_times) {
    if (ts < -tol || ts > t_end + tol)
      throw ConfigError("snapshot time " + std::to_string(ts) + " outside [0, t_end]");
    events.push_back({std::clamp(ts, 0.0, t_end), schedule.observe_snapshots, true});
  }
  if (t_end > 0.0) events.push_back({t_end, true, true});

  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  std::vector<Event> merged;
  for (const auto& ev : events) {
    if (!merged.empty() && ev.t - merged.back().t <= tol) {
      // Keep the exact endpoint values 0 and t_end.
      if (ev.t == t_end) merged.back().t = t_end;
      merged.back().observe = merged.back().observe || ev.observe;
      merged.back().store = merged.back().store || ev.store;
    } else {
      merged.push_back(ev);
    }
  }
  return merged;
}

}  // namespace detail

}  // namespace rsw
