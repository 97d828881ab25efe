#include "rsw/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsw/error.hpp"
#include "rsw/norms.hpp"
#include "rsw/state_ops.hpp"

namespace rsw {

namespace {

template <class S>
void fill_norms(const S& s, const Grid1D& grid, Observables& o) {
  double sq = 0.0, linf = 0.0;
  for_each_field(s, [&](const Field& f) {
    const double l = l2_norm(f, grid);
    sq += l * l;
    linf = std::max(linf, f.max_abs());
  });
  o.l2 = std::sqrt(sq);
  o.linf = linf;
}

double pointwise_max_norm(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::hypot(a[j], b[j]));
  return m;
}

void fill_primary(const Field& primary, const Grid1D& grid, Observables& o) {
  o.mass = integrate(primary, grid);
  o.mean = primary.mean();
}

}  // namespace

Observables observe(const ScalarWave& w, WaveModel model, const SpectralPlan& plan) {
  const auto& grid = plan.grid();
  Observables o;
  fill_primary(w.k, grid, o);
  fill_norms(w, grid, o);
  const Field kx = plan.deriv(w.k);
  Field density = (-0.25) * (w.k * w.k * w.k);
  density.add_scaled(1.0 / 12.0, kx * kx);
  if (model == WaveModel::Ostrovsky) {
    const Field anti = plan.antideriv(w.k);
    density.add_scaled(-0.25, anti * anti);
  }
  o.energy = integrate(density, grid);
  return o;
}

Observables observe_linear(const LinearState& s, const SpectralPlan& plan) {
  const auto& grid = plan.grid();
  Observables o;
  fill_primary(s.zeta, grid, o);
  fill_norms(s, grid, o);
  o.energy = 0.5 * o.l2 * o.l2;
  o.geo_residual = geostrophic_residual(s, plan).norm;
  return o;
}

Observables observe(const LinearState& s, const ModelContext& ctx) {
  const auto& grid = ctx.plan.grid();
  Observables o;
  fill_primary(s.zeta, grid, o);
  fill_norms(s, grid, o);
  o.energy = symmetrizer_energy(s.zeta, s.u, s.v, 0, ctx.params, ctx.bathymetry, ctx.plan, ctx.h_min);
  o.geo_residual = geostrophic_residual(s, ctx.plan).norm;
  return o;
}

Observables observe(const BoussinesqState& s, const ModelContext& ctx) {
  const auto& grid = ctx.plan.grid();
  Observables o;
  fill_primary(s.zeta, grid, o);
  fill_norms(s, grid, o);
  o.energy = symmetrizer_energy(s, 0, ctx.params, ctx.bathymetry, ctx.plan, ctx.h_min);
  o.w_max = pointwise_max_norm(s.w1, s.w2);
  o.geo_residual = geostrophic_residual(LinearState{s.zeta, s.u, s.v}, ctx.plan).norm;
  return o;
}

Observables observe(const GNState& s, const ModelContext& ctx) {
  const auto& grid = ctx.plan.grid();
  Observables o;
  fill_primary(s.zeta, grid, o);
  fill_norms(s, grid, o);
  o.energy = symmetrizer_energy(s.zeta, s.u, s.v, 0, ctx.params, ctx.bathymetry, ctx.plan, ctx.h_min);
  o.w_max = pointwise_max_norm(s.vs1, s.vs2);
  o.geo_residual = geostrophic_residual(LinearState{s.zeta, s.u, s.v}, ctx.plan).norm;
  return o;
}

Observables observe(const GNMediumState& s, const ModelContext& ctx) {
  const auto& grid = ctx.plan.grid();
  Observables o;
  fill_primary(s.zeta, grid, o);
  fill_norms(s, grid, o);
  o.energy = symmetrizer_energy(s.zeta, s.u, s.v, 0, ctx.params, ctx.bathymetry, ctx.plan, ctx.h_min);
  o.geo_residual = geostrophic_residual(LinearState{s.zeta, s.u, s.v}, ctx.plan).norm;
  return o;
}

std::string column_name(Extra e) {
  switch (e) {
    case Extra::WMax: return "w_max";
    case Extra::GeoResidual: return "geo_residual";
    case Extra::Mean: return "mean";
  }
  return "";
}

Extra parse_extra(const std::string& name) {
  if (name == "w_max") return Extra::WMax;
  if (name == "geo_residual") return Extra::GeoResidual;
  if (name == "mean") return Extra::Mean;
  throw ConfigError("output.observables: unknown observable '" + name + "' (expected w_max, geo_residual, mean)");
}

// ---------------------------------------------------------------------------

InvariantMonitor::InvariantMonitor(std::size_t n, bool conserves_l2, DriftTolerances tol)
    : n_(n), conserves_l2_(conserves_l2), tol_(tol) {}

void InvariantMonitor::record(double t, const Observables& o) { rows_.push_back({t, o}); }

double InvariantMonitor::max_mass_drift() const {
  double worst = 0.0;
  for (const auto& r : rows_) worst = std::max(worst, std::abs(r.values.mass - rows_.front().values.mass));
  return worst;
}

double InvariantMonitor::max_l2_rel_drift() const {
  double worst = 0.0;
  if (rows_.empty()) return worst;
  const double l0 = rows_.front().values.l2;
  if (l0 == 0.0) return worst;
  for (const auto& r : rows_) worst = std::max(worst, std::abs(r.values.l2 - l0) / l0);
  return worst;
}

std::vector<std::string> InvariantMonitor::drift_flags() const {
  std::vector<std::string> flags;
  if (rows_.empty()) return flags;
  const auto& first = rows_.front().values;
  auto fmt = [](const char* what, double value, double limit) {
    std::ostringstream os;
    os << what << " drift " << value << " exceeds " << limit;
    return os.str();
  };
  const double mass_limit = tol_.mass_abs * static_cast<double>(n_) * std::max(1.0, std::abs(first.mass));
  if (const double d = max_mass_drift(); d > mass_limit) flags.push_back(fmt("mass", d, mass_limit));
  if (conserves_l2_)
    if (const double d = max_l2_rel_drift(); d > tol_.l2_rel) flags.push_back(fmt("relative l2", d, tol_.l2_rel));
  if (!std::isnan(first.mean)) {
    const double limit = tol_.mean_abs * std::max(1.0, first.linf);
    double worst = 0.0;
    for (const auto& r : rows_) worst = std::max(worst, std::abs(r.values.mean - first.mean));
    if (worst > limit) flags.push_back(fmt("mean", worst, limit));
  }
  if (!std::isnan(first.geo_residual) && first.geo_residual <= tol_.geo_abs) {
    double worst = 0.0;
    for (const auto& r : rows_) worst = std::max(worst, r.values.geo_residual);
    if (worst > tol_.geo_abs) flags.push_back(fmt("geostrophic residual", worst, tol_.geo_abs));
  }
  return flags;
}

}  // namespace rsw
