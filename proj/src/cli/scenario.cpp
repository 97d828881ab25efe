#include "rsw/cli/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rsw/cli/output.hpp"
#include "rsw/error.hpp"
#include "rsw/gn.hpp"
#include "rsw/models.hpp"
#include "rsw/studies.hpp"
#include "rsw/wkb.hpp"

namespace rsw::cli {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Boussinesq: return "boussinesq";
    case ModelKind::WeakRotation: return "weak_rotation";
    case ModelKind::GN: return "gn";
    case ModelKind::GNMedium: return "gn_medium";
    case ModelKind::Ostrovsky: return "ostrovsky";
    case ModelKind::KdV: return "kdv";
    case ModelKind::PoincareLinear: return "poincare_linear";
  }
  return "";
}

std::optional<ModelKind> parse_model(std::string_view text) {
  for (auto k : {ModelKind::Boussinesq, ModelKind::WeakRotation, ModelKind::GN, ModelKind::GNMedium,
                 ModelKind::Ostrovsky, ModelKind::KdV, ModelKind::PoincareLinear})
    if (text == to_string(k)) return k;
  return std::nullopt;
}

std::vector<std::string> field_names(ModelKind kind) {
  switch (kind) {
    case ModelKind::Boussinesq: return {"zeta", "u", "v", "w1", "w2"};
    case ModelKind::WeakRotation:
    case ModelKind::PoincareLinear: return {"zeta", "u", "v"};
    case ModelKind::GN:
      return {"zeta", "u", "v", "vs1", "vs2", "e_xx", "e_xy", "e_yy", "f_111", "f_112", "f_122", "f_222"};
    case ModelKind::GNMedium: return {"zeta", "u", "v", "e_xx", "e_xy", "e_yy"};
    case ModelKind::Ostrovsky:
    case ModelKind::KdV: return {"k"};
  }
  return {};
}

RegimeTag default_regime(ModelKind kind) {
  switch (kind) {
    case ModelKind::Boussinesq: return RegimeTag::Bouss;
    case ModelKind::WeakRotation:
    case ModelKind::Ostrovsky: return RegimeTag::Ost;
    case ModelKind::GN: return RegimeTag::GN;
    case ModelKind::GNMedium: return RegimeTag::GNMedium;
    case ModelKind::KdV: return RegimeTag::KdV;
    case ModelKind::PoincareLinear: return RegimeTag::Poin;
  }
  return RegimeTag::Bouss;
}

namespace {

bool is_scalar(ModelKind k) { return k == ModelKind::Ostrovsky || k == ModelKind::KdV; }

// Column of a CSV file: by header name, else the last column.
Field read_profile_file(const std::filesystem::path& path, const std::string& column, std::size_t n,
                        const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ConfigError("key '" + key + "': cannot open '" + path.string() + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw ConfigError("key '" + key + "': '" + path.string() + "' has no data");
  std::size_t col = rows.front().size() - 1;
  std::size_t first = 0;
  char* end = nullptr;
  std::strtod(rows.front().back().c_str(), &end);
  const bool has_header = end == rows.front().back().c_str();
  if (has_header) {
    first = 1;
    if (!column.empty()) {
      bool found = false;
      for (std::size_t c = 0; c < rows.front().size(); ++c)
        if (rows.front()[c] == column) {
          col = c;
          found = true;
        }
      if (!found) throw ConfigError("key '" + key + "': no column '" + column + "' in '" + path.string() + "'");
    }
  }
  if (rows.size() - first != n)
    throw ConfigError("key '" + key + "': '" + path.string() + "' has " + std::to_string(rows.size() - first) +
                      " rows, grid has " + std::to_string(n));
  Field f(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (col >= rows[first + j].size()) throw ConfigError("key '" + key + "': short row in '" + path.string() + "'");
    f[j] = parse_double(rows[first + j][col], key);
  }
  return f;
}

struct ProfileSpec {
  std::string prefix;  ///< e.g. "initial.u." or "initial."
  std::string profile;
  std::string source;  ///< copy / dx
};

Field build_profile(const Config& cfg, const ProfileSpec& spec, const Grid1D& grid, double mu,
                    const std::map<std::string, Field>& done, const SpectralPlan& plan, nlohmann::json& resolved) {
  const auto& p = spec.prefix;
  const double amplitude = cfg.get_double(p + "amplitude", 1.0);
  const double width = cfg.get_double(p + "width", 1.0);
  const double center = cfg.get_double(p + "center", 0.0);
  const double power = cfg.get_double(p + "scale_mu_power", 0.0);
  if (!(width > 0.0)) throw ConfigError("key '" + p + "width' must be positive");
  resolved[p + "profile"] = spec.profile;

  Field f;
  const std::string& name = spec.profile;
  if (name == "zero") {
    f = Field(grid.n());
  } else if (name == "gaussian") {
    f = gaussian(grid, amplitude, width, center);
  } else if (name == "gaussian_d1") {
    f = gaussian_d1(grid, amplitude, width, center);
  } else if (name == "gaussian_d2") {
    f = gaussian_d2(grid, amplitude, width, center);
  } else if (name == "sech2") {
    f = sech2(grid, amplitude, width, center);
  } else if (name == "kdv_soliton") {
    // A sech^2(B x) with A = 4 B^2 / 3 solves the KdV equation with speed 2 B^2 / 3.
    if (!(amplitude > 0.0)) throw ConfigError("key '" + p + "amplitude' must be positive for kdv_soliton");
    const double b = std::sqrt(0.75 * amplitude);
    f = sech2(grid, amplitude, 1.0 / b, center);
  } else if (name == "file") {
    const std::string key = p + "file";
    std::filesystem::path path = cfg.require(key);
    if (path.is_relative()) path = cfg.base_dir() / path;
    f = read_profile_file(path, cfg.get_string(p + "column", ""), grid.n(), key);
  } else if (name == "copy" || name == "dx") {
    const auto it = done.find(spec.source);
    if (it == done.end()) throw ConfigError("key '" + p + "source': unknown field '" + spec.source + "'");
    f = name == "copy" ? it->second : plan.deriv(it->second);
    f *= amplitude;
  } else {
    throw ConfigError("key '" + p + "profile': unknown profile '" + name +
                      "' (expected zero, gaussian, gaussian_d1, gaussian_d2, sech2, kdv_soliton, file, copy, dx)");
  }
  if (power != 0.0) f *= std::pow(mu, power);
  return f;
}

std::map<std::string, Field> build_initial(const Config& cfg, ModelKind model, const Grid1D& grid, double mu,
                                           const SpectralPlan& plan, nlohmann::json& resolved) {
  const auto names = field_names(model);
  std::map<std::string, ProfileSpec> specs;
  for (const auto& name : names) {
    const std::string prefix = "initial." + name + ".";
    ProfileSpec spec{prefix, cfg.get_string(prefix + "profile", ""), cfg.get_string(prefix + "source", "")};
    if (name == names.front() && cfg.has("initial.profile")) {
      if (!spec.profile.empty())
        throw ConfigError("key 'initial.profile' conflicts with '" + prefix + "profile'");
      spec = ProfileSpec{"initial.", cfg.require("initial.profile"), cfg.get_string("initial.source", "")};
    }
    if (spec.profile.empty()) spec.profile = "zero";
    specs[name] = spec;
  }
  std::map<std::string, Field> done;
  // Fields defined from other fields are resolved once their sources exist.
  for (std::size_t pass = 0; pass <= names.size() && done.size() < names.size(); ++pass) {
    for (const auto& name : names) {
      if (done.count(name)) continue;
      const auto& spec = specs[name];
      const bool dependent = spec.profile == "copy" || spec.profile == "dx";
      if (dependent && !done.count(spec.source) &&
          std::find(names.begin(), names.end(), spec.source) != names.end())
        continue;
      done[name] = build_profile(cfg, spec, grid, mu, done, plan, resolved);
    }
  }
  if (done.size() < names.size()) throw ConfigError("initial: circular copy/dx sources");
  return done;
}

}  // namespace

Scenario build_scenario(const Config& cfg) {
  Scenario sc;
  nlohmann::json& res = sc.resolved;

  const std::string model_name = cfg.require("model.name");
  const auto model = parse_model(model_name);
  if (!model)
    throw ConfigError("key 'model.name': unknown model '" + model_name +
                      "' (expected boussinesq, weak_rotation, gn, gn_medium, ostrovsky, kdv, poincare_linear)");
  sc.model = *model;
  res["model.name"] = model_name;
  sc.h_min = cfg.get_double("model.h_min", 0.1);
  res["model.h_min"] = sc.h_min;

  const std::string tag_name = cfg.get_string("regime.tag", std::string(to_string(default_regime(sc.model))));
  const auto tag = parse_regime_tag(tag_name);
  if (!tag) throw ConfigError("key 'regime.tag': unknown regime '" + tag_name + "'");
  sc.regime.tag = *tag;
  sc.regime.mu0 = cfg.get_double("regime.mu0", 1.0);
  sc.regime.order_constant = cfg.get_double("regime.c", 1.0);
  res["regime.tag"] = tag_name;
  res["regime.mu0"] = sc.regime.mu0;
  res["regime.c"] = sc.regime.order_constant;

  const double mu = cfg.require_double("params.mu");
  DimensionlessParams p = regime_params(sc.regime.tag, mu);
  p.eps = cfg.get_double("params.eps", p.eps);
  p.beta = cfg.get_double("params.beta", p.beta);
  p.gamma = cfg.get_double("params.gamma", p.gamma);
  p.inv_ro = cfg.get_double("params.inv_ro", p.inv_ro);
  sc.params = p;
  res["params.mu"] = p.mu;
  res["params.eps"] = p.eps;
  res["params.beta"] = p.beta;
  res["params.gamma"] = p.gamma;
  res["params.inv_ro"] = p.inv_ro;
  const RegimeCheck check = validate_regime(p, sc.regime);
  if (!check.valid) {
    std::string msg = "parameters violate regime '" + tag_name + "':";
    for (const auto& v : check.violations) msg += "\n  " + v;
    throw RegimeViolation(msg);
  }

  const long long n = cfg.get_int("grid.n", -1);
  if (n < 0) cfg.require("grid.n");
  sc.n = static_cast<std::size_t>(n);
  sc.length = cfg.require_double("grid.length");
  const Grid1D grid(sc.n, sc.length);
  const SpectralPlan plan(grid);
  res["grid.n"] = sc.n;
  res["grid.length"] = sc.length;

  sc.initial = build_initial(cfg, sc.model, grid, mu, plan, res);
  if (sc.model == ModelKind::Ostrovsky && !ScalarWave{sc.initial.at("k")}.antiderivative_defined())
    throw NonZeroMean("initial k must have zero mean for the ostrovsky model");

  sc.bathymetry = Field(sc.n);
  if (cfg.has("bathymetry.profile")) {
    if (is_scalar(sc.model) || sc.model == ModelKind::PoincareLinear)
      throw ConfigError("key 'bathymetry.profile': model " + model_name + " has a flat bottom");
    sc.bathymetry = build_profile(cfg, {"bathymetry.", cfg.require("bathymetry.profile"), ""}, grid, mu, {}, plan, res);
  }

  const std::string default_scheme = is_scalar(sc.model) ? "ifrk4" : sc.model == ModelKind::PoincareLinear ? "exact" : "rk4";
  const std::string scheme = cfg.get_string("stepper.scheme", default_scheme);
  res["stepper.scheme"] = scheme;
  if (sc.model == ModelKind::PoincareLinear) {
    if (scheme != "exact") throw ConfigError("key 'stepper.scheme': poincare_linear is evaluated exactly (use 'exact')");
  } else {
    const auto s = parse_scheme(scheme);
    if (!s) throw ConfigError("key 'stepper.scheme': unknown scheme '" + scheme + "' (expected rk4, ifrk4)");
    if (*s == Scheme::IFRK4 && !is_scalar(sc.model))
      throw ConfigError("key 'stepper.scheme': ifrk4 applies to ostrovsky and kdv only");
    sc.stepper.scheme = *s;
  }
  sc.stepper.dt = cfg.get_double("stepper.dt", 0.5 * grid.dx());
  sc.stepper.t_end = cfg.require_double("stepper.t_end");
  sc.stepper.cfl_guard = cfg.get_double("stepper.cfl_guard", 2.5);
  validate_stepper(sc.stepper);
  if (is_scalar(sc.model)) check_dispersive_stability(sc.stepper, plan);
  res["stepper.dt"] = sc.stepper.dt;
  res["stepper.t_end"] = sc.stepper.t_end;
  res["stepper.cfl_guard"] = sc.stepper.cfl_guard;

  sc.every = cfg.get_double("output.every", 0.0);
  if (sc.every < 0.0) throw ConfigError("key 'output.every' must be >= 0");
  sc.snapshots = cfg.get_double_list("output.snapshots");
  for (double t : sc.snapshots)
    if (t < 0.0 || t > sc.stepper.t_end) throw ConfigError("key 'output.snapshots': time outside [0, t_end]");
  for (const auto& name : cfg.get_string_list("output.observables")) {
    const Extra e = parse_extra(name);
    const bool available = e == Extra::Mean || (e == Extra::WMax && (sc.model == ModelKind::Boussinesq ||
                                                                      sc.model == ModelKind::GN)) ||
                           (e == Extra::GeoResidual && !is_scalar(sc.model));
    if (!available) throw ConfigError("key 'output.observables': '" + name + "' is not defined for " + model_name);
    sc.extras.push_back(e);
  }
  sc.out_dir = cfg.get_string("output.dir", "out");
  res["output.every"] = sc.every;
  res["output.snapshots"] = sc.snapshots;
  res["output.dir"] = sc.out_dir.string();
  const int threads = static_cast<int>(cfg.get_int("threads", 1));
  if (threads < 1) throw ConfigError("key 'threads' must be >= 1");
  res["threads"] = threads;

  cfg.reject_unknown();
  return sc;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json observables_json(const Observables& o) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"mass", num(o.mass)},         {"l2", num(o.l2)},     {"linf", num(o.linf)},
          {"energy", num(o.energy)},     {"w_max", num(o.w_max)}, {"geo_residual", num(o.geo_residual)},
          {"mean", num(o.mean)}};
}

double extra_value(const Observables& o, Extra e) {
  switch (e) {
    case Extra::WMax: return o.w_max;
    case Extra::GeoResidual: return o.geo_residual;
    case Extra::Mean: return o.mean;
  }
  return 0.0;
}

template <class S>
S assemble(const std::map<std::string, Field>& initial, const std::vector<std::string>& names) {
  S s;
  std::size_t i = 0;
  for_each_field(s, [&](Field& f) { f = initial.at(names[i++]); });
  return s;
}

template <class S>
std::vector<const Field*> field_pointers(const S& s) {
  std::vector<const Field*> out;
  for_each_field(s, [&](const Field& f) { out.push_back(&f); });
  return out;
}

struct RunOutput {
  InvariantMonitor monitor;
  std::vector<double> snapshot_times;
  double integration_seconds = 0.0;
};

template <class S, class Step, class ObserveFn>
RunOutput execute(const Scenario& sc, Step&& step, S s0, ObserveFn&& observe_fn, bool conserves_l2,
                  const Grid1D& grid) {
  RunOutput out{InvariantMonitor(sc.n, conserves_l2), {}, 0.0};
  ObservationSchedule schedule;
  schedule.every = sc.every;
  schedule.snapshot_times = sc.snapshots;
  schedule.observe_snapshots = true;
  std::function<void(double, const S&)> observer = [&](double t, const S& s) { out.monitor.record(t, observe_fn(s)); };
  const auto start = std::chrono::steady_clock::now();
  const Trajectory<S> traj = integrate(step, std::move(s0), sc.stepper, schedule, observer);
  out.integration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!sc.snapshots.empty()) {
    const auto names = field_names(sc.model);
    std::size_t index = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      // Stored states are 0, the requested times and t_end; only the requested ones are written.
      const double t = traj.times[i];
      bool requested = false;
      for (double r : sc.snapshots) requested = requested || std::abs(r - t) <= 1e-12 * std::max(1.0, sc.stepper.t_end);
      if (!requested) continue;
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", index++);
      write_snapshot(sc.out_dir / "snapshots" / name, grid, names, field_pointers(traj.states[i]));
      out.snapshot_times.push_back(t);
    }
  }
  return out;
}

// The linear system is solved exactly at each output time.
RunOutput execute_poincare(const Scenario& sc, const SpectralPlan& plan) {
  const auto names = field_names(sc.model);
  const LinearState s0 = assemble<LinearState>(sc.initial, names);
  RunOutput out{InvariantMonitor(sc.n, true), {}, 0.0};
  ObservationSchedule schedule;
  schedule.every = sc.every;
  schedule.snapshot_times = sc.snapshots;
  schedule.observe_snapshots = true;
  const auto start = std::chrono::steady_clock::now();
  std::size_t index = 0;
  for (const auto& ev : detail::build_events(sc.stepper.t_end, schedule)) {
    const LinearState s = poincare_semigroup(s0, ev.t, plan);
    if (ev.observe) out.monitor.record(ev.t, observe_linear(s, plan));
    bool requested = false;
    for (double r : sc.snapshots) requested = requested || std::abs(r - ev.t) <= 1e-12 * std::max(1.0, sc.stepper.t_end);
    if (requested) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", index++);
      write_snapshot(sc.out_dir / "snapshots" / name, plan.grid(), names, field_pointers(s));
      out.snapshot_times.push_back(ev.t);
    }
  }
  out.integration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
  const auto start = std::chrono::steady_clock::now();
  const SpectralPlan plan(Grid1D(sc.n, sc.length));
  const auto& grid = plan.grid();
  const auto names = field_names(sc.model);
  const ModelContext ctx(sc.params, sc.bathymetry, plan, sc.h_min);
  std::filesystem::create_directories(sc.out_dir);

  std::optional<RunOutput> run;
  switch (sc.model) {
    case ModelKind::Boussinesq:
      run = execute(sc, rk4_stepper([&](const BoussinesqState& s) { return boussinesq_rhs(s, ctx); }),
                    assemble<BoussinesqState>(sc.initial, names),
                    [&](const BoussinesqState& s) { return observe(s, ctx); }, false, grid);
      break;
    case ModelKind::WeakRotation:
      run = execute(sc, rk4_stepper([&](const LinearState& s) { return weak_rotation_rhs(s, ctx); }),
                    assemble<LinearState>(sc.initial, names), [&](const LinearState& s) { return observe(s, ctx); },
                    false, grid);
      break;
    case ModelKind::GN:
      run = execute(sc, rk4_stepper([&](const GNState& s) { return gn_rhs(s, ctx); }),
                    assemble<GNState>(sc.initial, names), [&](const GNState& s) { return observe(s, ctx); }, false,
                    grid);
      break;
    case ModelKind::GNMedium:
      run = execute(sc, rk4_stepper([&](const GNMediumState& s) { return gn_medium_rhs(s, ctx); }),
                    assemble<GNMediumState>(sc.initial, names),
                    [&](const GNMediumState& s) { return observe(s, ctx); }, false, grid);
      break;
    case ModelKind::Ostrovsky:
    case ModelKind::KdV: {
      const WaveModel wm = sc.model == ModelKind::Ostrovsky ? WaveModel::Ostrovsky : WaveModel::KdV;
      auto observe_fn = [&](const ScalarWave& k) { return observe(k, wm, plan); };
      const ScalarWave k0 = assemble<ScalarWave>(sc.initial, names);
      if (sc.stepper.scheme == Scheme::IFRK4) {
        IfRk4Stepper stepper = wm == WaveModel::Ostrovsky ? IfRk4Stepper::ostrovsky(plan) : IfRk4Stepper::kdv(plan);
        run = execute(sc, [&](const ScalarWave& k, double h) { return stepper(k, h); }, k0, observe_fn, true, grid);
      } else {
        run = execute(sc, rk4_stepper([&](const ScalarWave& k) { return ScalarWave{slow_rhs(wm, k.k, plan)}; }), k0,
                      observe_fn, true, grid);
      }
      break;
    }
    case ModelKind::PoincareLinear: run = execute_poincare(sc, plan); break;
  }

  std::vector<std::string> header{"t", "mass", "l2", "linf", "energy"};
  for (Extra e : sc.extras) header.push_back(column_name(e));
  CsvWriter series(sc.out_dir / "series.csv", header);
  for (const auto& row : run->monitor.rows()) {
    std::vector<double> values{row.t, row.values.mass, row.values.l2, row.values.linf, row.values.energy};
    for (Extra e : sc.extras) values.push_back(extra_value(row.values, e));
    series.row(values);
  }
  series.close();

  RunResult result{sc.out_dir, run->monitor.drift_flags()};
  const auto& rows = run->monitor.rows();
  nlohmann::json j;
  j["model"] = std::string(to_string(sc.model));
  j["resolved_config"] = sc.resolved;
  j["outputs"] = {{"series", "series.csv"}, {"snapshot_times", run->snapshot_times}};
  j["invariants"] = {{"initial", observables_json(rows.front().values)},
                     {"final", observables_json(rows.back().values)},
                     {"max_mass_drift", run->monitor.max_mass_drift()},
                     {"max_l2_rel_drift", run->monitor.max_l2_rel_drift()},
                     {"drift_flags", result.drift_flags}};
  j["timings"] = {{"integration_seconds", run->integration_seconds},
                  {"total_seconds",
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  write_json(sc.out_dir / "run.json", j);
  return result;
}

}  // namespace rsw::cli
