#include "rsw/studies.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "rsw/error.hpp"
#include "rsw/gn.hpp"
#include "rsw/models.hpp"
#include "rsw/timeint.hpp"
#include "rsw/wkb.hpp"

namespace rsw {

Field gaussian(const Grid1D& grid, double amplitude, double sigma, double center) {
  return sample(grid, [=](double x) {
    const double s = (x - center) / sigma;
    return amplitude * std::exp(-0.5 * s * s);
  });
}

Field gaussian_d1(const Grid1D& grid, double amplitude, double sigma, double center) {
  return sample(grid, [=](double x) {
    const double s = (x - center) / sigma;
    return -amplitude * s * std::exp(-0.5 * s * s);
  });
}

Field gaussian_d2(const Grid1D& grid, double amplitude, double sigma, double center) {
  return sample(grid, [=](double x) {
    const double s = (x - center) / sigma;
    return amplitude * (s * s - 1.0) * std::exp(-0.5 * s * s);
  });
}

Field sech2(const Grid1D& grid, double amplitude, double width, double center) {
  return sample(grid, [=](double x) {
    const double c = 1.0 / std::cosh((x - center) / width);
    return amplitude * c * c;
  });
}

std::string_view to_string(StudyStatus status) {
  switch (status) {
    case StudyStatus::Ok: return "ok";
    case StudyStatus::Degenerate: return "degenerate";
    case StudyStatus::UnderResolved: return "under_resolved";
  }
  return "";
}

double fit_slope(const std::vector<double>& mu_values, const std::vector<double>& errors) {
  if (mu_values.size() != errors.size()) throw ValidationError("mu and error lists differ in length");
  if (mu_values.size() < 3) throw ValidationError("need ≥ 3 mu values for a slope fit");
  const std::size_t m = mu_values.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(mu_values[i] > 0.0) || !(errors[i] > 0.0)) throw ValidationError("slope fit needs positive mu and errors");
    lx[i] = std::log(mu_values[i]);
    ly[i] = std::log(errors[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("slope fit needs distinct mu values");
  return sxy / sxx;
}

namespace {

std::string percent_note(const char* what, double change) {
  std::ostringstream os;
  os << what << " changed the error by " << 100.0 * change << "%";
  return os.str();
}

std::vector<StudyPoint> compute_points(const std::vector<double>& mu_values,
                                       const std::function<StudyPoint(double)>& point_fn, int threads) {
  const std::size_t m = mu_values.size();
  std::vector<StudyPoint> points(m);
  std::vector<std::exception_ptr> failures(m);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < m; i = next++) {
      try {
        points[i] = point_fn(mu_values[i]);
        points[i].mu = mu_values[i];
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, 1, m);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return points;
}

}  // namespace

StudyReport run_error_study(const std::string& name, const std::vector<double>& mu_values,
                            const std::function<StudyPoint(double)>& point_fn, const ErrorStudyOptions& options) {
  if (mu_values.size() < 3) throw ValidationError("need ≥ 3 mu values for a slope fit");
  for (double mu : mu_values)
    if (!(mu > 0.0)) throw ValidationError("mu values must be positive");

  const auto start = std::chrono::steady_clock::now();
  StudyReport report;
  report.name = name;
  report.band = options.band;
  report.mu_values = mu_values;
  report.points = compute_points(mu_values, point_fn, options.threads);
  for (const auto& p : report.points) report.errors.push_back(p.error);

  auto finish = [&] {
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  const double worst = *std::max_element(report.errors.begin(), report.errors.end());
  if (worst <= options.degenerate_below) {
    report.status = StudyStatus::Degenerate;
    report.pass = true;
    return finish();
  }

  for (auto& p : report.points) {
    if (!(p.error > 0.0)) {
      p.included = false;
      p.note = "zero error";
      continue;
    }
    if (!std::isnan(p.error_refined_n)) {
      const double change = std::abs(p.error_refined_n - p.error) / p.error;
      if (change > options.refinement_tol) {
        p.included = false;
        p.note = percent_note("n-doubling", change);
      }
    }
    if (p.included && !std::isnan(p.error_refined_dt)) {
      const double change = std::abs(p.error_refined_dt - p.error) / p.error;
      if (change > options.refinement_tol) {
        p.included = false;
        p.note = percent_note("dt-halving", change);
      }
    }
  }

  // Errors must decrease with mu; the largest mu may be pre-asymptotic.
  std::vector<std::size_t> order(report.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return report.points[a].mu > report.points[b].mu; });
  if (order.size() >= 2) {
    auto& top = report.points[order[0]];
    const auto& second = report.points[order[1]];
    if (top.included && top.error < second.error) {
      top.included = false;
      top.note = "pre-asymptotic: error below that of the next smaller mu";
    }
  }

  std::vector<double> mus, errs;
  for (const auto& p : report.points)
    if (p.included) {
      mus.push_back(p.mu);
      errs.push_back(p.error);
    }
  if (mus.size() < 3) {
    report.status = StudyStatus::UnderResolved;
    report.pass = false;
    return finish();
  }
  report.fitted_slope = fit_slope(mus, errs);
  report.pass = report.fitted_slope >= options.band.lower && report.fitted_slope <= options.band.upper &&
                report.fitted_slope > options.band.strictly_above;
  return finish();
}

// ---------------------------------------------------------------------------

SlopeBand default_band(RegimeTag regime) {
  switch (regime) {
    case RegimeTag::KdV: return {1.0, 0.75, 1.25};
    case RegimeTag::Ost: return {1.0, 0.7, 1.3};
    case RegimeTag::Poin: return {0.75, 0.7, std::numeric_limits<double>::infinity(), 0.5};
    default: throw ValidationError("approximation studies exist for poin, ost and kdv only");
  }
}

namespace {

double horizon(RegimeTag regime, double T, double mu) {
  return regime == RegimeTag::KdV ? T / mu : T / std::sqrt(mu);
}

void check_regime(const DimensionlessParams& params, RegimeTag tag) {
  const auto check = validate_regime(params, Regime{tag});
  if (!check.valid) {
    std::string msg = "regime " + std::string(to_string(tag)) + " violated:";
    for (const auto& v : check.violations) msg += " " + v + ";";
    throw RegimeViolation(msg);
  }
}

}  // namespace

StudyPoint approximation_error(const ApproximationStudyConfig& cfg, double mu, std::size_t n, double dt_factor) {
  const RegimeTag regime = cfg.regime;
  if (regime != RegimeTag::Poin && regime != RegimeTag::Ost && regime != RegimeTag::KdV)
    throw ValidationError("approximation studies exist for poin, ost and kdv only");
  if (cfg.observations < 1) throw ConfigError("study.observations must be >= 1");

  const SpectralPlan plan(Grid1D(n, cfg.length));
  const auto& grid = plan.grid();
  const DimensionlessParams params = regime_params(regime, mu);
  check_regime(params, regime);
  const ModelContext ctx(params, plan);

  const double t_end = horizon(regime, cfg.T, mu);
  const double dx_base = cfg.length / static_cast<double>(cfg.n);
  const double steps = std::ceil(t_end / (cfg.cfl * dx_base) - 1e-9);
  StepperConfig stepper{t_end / steps * dt_factor, t_end, Scheme::RK4};
  ObservationSchedule schedule;
  schedule.every = t_end / cfg.observations;

  StudyPoint point;
  point.mu = mu;
  auto record = [&point](double t, double err) {
    point.series.emplace_back(t, err);
    point.error = std::max(point.error, err);
  };

  if (regime == RegimeTag::Poin) {
    const Field v0 = gaussian_d1(grid, cfg.amplitude, cfg.sigma);
    const Field u0 = gaussian(grid, cfg.amplitude, cfg.sigma);
    const LinearState linear0{plan.deriv(v0), u0, v0};
    BoussinesqState s0{linear0.zeta, u0, v0, Field(n), u0};
    std::function<void(double, const BoussinesqState&)> observer = [&](double t, const BoussinesqState& s) {
      const LinearState exact = poincare_semigroup(linear0, t, plan);
      record(t, std::max({max_abs_diff(s.zeta, exact.zeta), max_abs_diff(s.u, exact.u),
                          max_abs_diff(s.v, exact.v)}));
    };
    integrate(rk4_stepper([&ctx](const BoussinesqState& s) { return boussinesq_rhs(s, ctx); }), std::move(s0),
              stepper, schedule, observer);
    return point;
  }

  const WaveModel model = regime == RegimeTag::Ost ? WaveModel::Ostrovsky : WaveModel::KdV;
  const Field k0 = gaussian_d2(grid, cfg.amplitude, cfg.sigma);
  const Field v0 = gaussian_d1(grid, cfg.amplitude, cfg.sigma);
  const double v_scale = regime == RegimeTag::Ost ? std::sqrt(mu) : mu;

  std::vector<double> taus;
  for (int j = 0; j < cfg.observations; ++j) taus.push_back(mu * (static_cast<double>(j) * schedule.every));
  taus.push_back(mu * t_end);
  const SlowTrajectory slow = solve_slow_trajectory(model, k0, taus, mu * stepper.dt, plan);

  std::function<void(double, const LinearState&)> observer = [&](double t, const LinearState& s) {
    const LeadingAnsatz app = leading_ansatz(slow, mu, t, plan);
    record(t, std::max(max_abs_diff(s.zeta, app.zeta), max_abs_diff(s.u, app.u)));
  };
  integrate(rk4_stepper([&ctx](const LinearState& s) { return weak_rotation_rhs(s, ctx); }),
            LinearState{k0, k0, v_scale * v0}, stepper, schedule, observer);
  return point;
}

StudyReport approximation_study(const ApproximationStudyConfig& cfg, const SlopeBand& band) {
  ErrorStudyOptions options;
  options.band = band;
  options.threads = cfg.threads;
  auto point_fn = [&cfg](double mu) {
    StudyPoint p = approximation_error(cfg, mu, cfg.n, 1.0);
    if (cfg.refinement_checks) {
      p.error_refined_n = approximation_error(cfg, mu, 2 * cfg.n, 1.0).error;
      p.error_refined_dt = approximation_error(cfg, mu, cfg.n, 0.5).error;
    }
    return p;
  };
  return run_error_study("approximation_" + std::string(to_string(cfg.regime)), cfg.mu_values, point_fn, options);
}

// ---------------------------------------------------------------------------

std::string_view to_string(ReductionPair pair) {
  switch (pair) {
    case ReductionPair::GNToBouss: return "gn_bouss";
    case ReductionPair::BoussToWeak: return "bouss_weak";
    case ReductionPair::GNMediumToWeak: return "gn_medium_weak";
  }
  return "";
}

std::optional<ReductionPair> parse_reduction_pair(std::string_view text) {
  for (auto p : {ReductionPair::GNToBouss, ReductionPair::BoussToWeak, ReductionPair::GNMediumToWeak})
    if (text == to_string(p)) return p;
  return std::nullopt;
}

SlopeBand default_band(ReductionPair pair) {
  if (pair == ReductionPair::GNMediumToWeak) return {1.5, 1.2, 1.8};
  return {2.0, 1.7, 2.3};
}

namespace {

// Fixed smooth state family; every field is O(amplitude).
struct ReductionFamily {
  Field zeta, u, v, vs1, vs2, exx, exy, eyy, f111, f112, f122, f222, b;

  ReductionFamily(const Grid1D& g, double a)
      : zeta(gaussian(g, a, 2.0)),
        u(gaussian(g, 0.8 * a, 2.5, 1.0)),
        v(gaussian_d1(g, 0.5 * a, 2.0, -1.0)),
        vs1(gaussian(g, 0.6 * a, 2.0, 0.5)),
        vs2(gaussian_d1(g, 0.4 * a, 2.5)),
        exx(gaussian(g, 0.3 * a, 2.0)),
        exy(gaussian_d1(g, 0.2 * a, 2.0)),
        eyy(gaussian(g, 0.25 * a, 2.0, 1.0)),
        f111(gaussian(g, 0.1 * a, 2.0)),
        f112(gaussian_d1(g, 0.2 * a, 2.0)),
        f122(gaussian(g, 0.15 * a, 2.0, -1.0)),
        f222(gaussian_d2(g, 0.05 * a, 2.0)),
        b(gaussian(g, 1.0, 4.0, 2.0)) {}
};

double max_diff(std::initializer_list<std::pair<const Field*, const Field*>> pairs) {
  double m = 0.0;
  for (const auto& [a, b] : pairs) m = std::max(m, max_abs_diff(*a, *b));
  return m;
}

}  // namespace

double reduction_residual(ReductionPair pair, double mu, std::size_t n, double length, double amplitude) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  const SpectralPlan plan(Grid1D(n, length));
  const ReductionFamily fam(plan.grid(), amplitude);

  switch (pair) {
    case ReductionPair::GNToBouss: {
      const DimensionlessParams p{mu, mu, 0.0, mu, 1.0};
      const ModelContext ctx(p, fam.b, plan);
      const GNState gs{fam.zeta, fam.u, fam.v, fam.vs1, fam.vs2, fam.exx, fam.exy, fam.eyy,
                       fam.f111, fam.f112, fam.f122, fam.f222};
      const Field h = water_depth(fam.zeta, ctx);
      const BoussinesqState bs{fam.zeta, fam.u, fam.v, fam.vs1 / h, fam.vs2 / h};
      const GNState dg = gn_rhs(gs, ctx);
      const BoussinesqState db = boussinesq_rhs(bs, ctx);
      // d/dt (V_sharp / h) = (dV_sharp - W eps zeta_t) / h
      const Field ht = p.eps * dg.zeta;
      const Field dw1 = (dg.vs1 - bs.w1 * ht) / h;
      const Field dw2 = (dg.vs2 - bs.w2 * ht) / h;
      return max_diff({{&dg.zeta, &db.zeta}, {&dg.u, &db.u}, {&dg.v, &db.v}, {&dw1, &db.w1}, {&dw2, &db.w2}});
    }
    case ReductionPair::BoussToWeak: {
      const DimensionlessParams p{mu, mu, 0.0, mu, std::sqrt(mu)};
      const ModelContext ctx(p, fam.b, plan);
      const BoussinesqState bs{fam.zeta, fam.u, fam.v, fam.vs1, fam.vs2};
      const BoussinesqState db = boussinesq_rhs(bs, ctx);
      const LinearState dw = weak_rotation_rhs(LinearState{fam.zeta, fam.u, fam.v}, ctx);
      return max_diff({{&db.zeta, &dw.zeta}, {&db.u, &dw.u}, {&db.v, &dw.v}});
    }
    case ReductionPair::GNMediumToWeak: {
      const double s = std::sqrt(mu);
      const DimensionlessParams p{s, 0.0, 0.0, mu, s};
      const ModelContext ctx(p, plan);
      const GNMediumState ms{fam.zeta, fam.u, fam.v, fam.exx, fam.exy, fam.eyy};
      const GNMediumState dm = gn_medium_rhs(ms, ctx);
      const LinearState dw = weak_rotation_rhs(LinearState{fam.zeta, fam.u, fam.v}, ctx);
      return max_diff({{&dm.zeta, &dw.zeta}, {&dm.u, &dw.u}, {&dm.v, &dw.v}});
    }
  }
  return 0.0;
}

StudyReport reduction_residual_study(const ReductionStudyConfig& cfg, const SlopeBand& band) {
  ErrorStudyOptions options;
  options.band = band;
  auto point_fn = [&cfg](double mu) {
    StudyPoint p;
    p.error = reduction_residual(cfg.pair, mu, cfg.n, cfg.length, cfg.amplitude);
    if (cfg.refinement_checks) p.error_refined_n = reduction_residual(cfg.pair, mu, 2 * cfg.n, cfg.length, cfg.amplitude);
    return p;
  };
  return run_error_study("reduction_" + std::string(to_string(cfg.pair)), cfg.mu_values, point_fn, options);
}

// ---------------------------------------------------------------------------

std::vector<double> log_spaced(double t0, double t1, std::size_t n) {
  if (!(t0 > 0.0) || !(t1 > t0) || n < 2) throw ValidationError("log_spaced needs 0 < t0 < t1 and n >= 2");
  std::vector<double> out(n);
  const double r = std::log(t1 / t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = t0 * std::exp(r * static_cast<double>(i));
  out.back() = t1;
  return out;
}

DecayReport decay_study(const LinearState& s0, const std::vector<double>& t_grid, const SpectralPlan& plan) {
  if (t_grid.empty()) throw ValidationError("decay study needs a time grid");
  const auto& grid = plan.grid();
  const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  if (grid.length() < 4.0 * t_max)
    throw DomainTooSmall("domain length " + std::to_string(grid.length()) + " < 4 * max(t) = " +
                         std::to_string(4.0 * t_max));

  const std::size_t edge = std::max<std::size_t>(1, grid.n() / 64);
  double peak = 0.0, at_edge = 0.0;
  for (const Field* f : {&s0.zeta, &s0.u, &s0.v}) {
    peak = std::max(peak, f->max_abs());
    for (std::size_t j = 0; j < edge; ++j)
      at_edge = std::max({at_edge, std::abs((*f)[j]), std::abs((*f)[grid.n() - 1 - j])});
  }
  if (at_edge > 1e-12 * peak)
    throw DomainTooSmall("initial data not localized: edge value " + std::to_string(at_edge));

  DecayReport report;
  report.times = t_grid;
  for (double t : t_grid) report.linf.push_back(poincare_semigroup(s0, t, plan).u.max_abs());
  if (peak == 0.0 || *std::min_element(report.linf.begin(), report.linf.end()) <= 0.0) {
    report.status = StudyStatus::Degenerate;
    return report;
  }
  report.exponent = -fit_slope(report.times, report.linf);
  return report;
}

}  // namespace rsw
