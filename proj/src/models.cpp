#include "rsw/models.hpp"

#include <cmath>
#include <string>

#include "rsw/error.hpp"

namespace rsw {

Field water_depth(const Field& zeta, const ModelContext& ctx) {
  Field h(zeta.size(), 1.0);
  h.add_scaled(ctx.params.eps, zeta);
  if (ctx.params.beta != 0.0) h.add_scaled(-ctx.params.beta, ctx.bathymetry);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!(h[j] >= ctx.h_min))
      throw NonPositiveDepth("water depth " + std::to_string(h[j]) + " below h_min=" + std::to_string(ctx.h_min) +
                             " at x=" + std::to_string(ctx.plan.grid().x(j)));
  }
  return h;
}

std::pair<Field, Field> rotation_transport_rhs(const Field& w1, const Field& w2, const Field& u,
                                               const ModelContext& ctx) {
  const auto& p = ctx.params;
  const auto& plan = ctx.plan;
  Field d1 = -p.eps * plan.product(u, plan.deriv(w1));
  Field d2 = -p.eps * plan.product(u, plan.deriv(w2));
  d1.add_scaled(p.inv_ro, w2);
  d2.add_scaled(-p.inv_ro, w1);
  return {std::move(d1), std::move(d2)};
}

namespace {

// Shared (zeta, u, v) part; `extra_u` is added inside the (1 - mu/3 d^2)^{-1} solve.
LinearState shallow_water_part(const Field& zeta, const Field& u, const Field& v, const Field* extra_u,
                               const ModelContext& ctx) {
  const auto& p = ctx.params;
  const auto& plan = ctx.plan;
  const Field h = water_depth(zeta, ctx);

  LinearState d;
  d.zeta = -plan.deriv(plan.product(h, u));

  Field forcing = -plan.deriv(zeta);
  forcing.add_scaled(-p.eps, plan.product(u, plan.deriv(u)));
  forcing.add_scaled(p.inv_ro, v);
  if (extra_u) forcing += *extra_u;
  d.u = plan.invert_one_minus_mu3_dxx(forcing, p.mu);

  d.v = -p.eps * plan.product(u, plan.deriv(v));
  d.v.add_scaled(-p.inv_ro, u);
  return d;
}

}  // namespace

BoussinesqState boussinesq_rhs(const BoussinesqState& s, const ModelContext& ctx) {
  const auto& p = ctx.params;
  // -(eps/Ro) mu^{3/2} / 24 d_x^2 (v_sharp / h), with W2 = v_sharp / h stored directly.
  const Field vort = (-p.inv_ro * std::pow(p.mu, 1.5) / 24.0) * ctx.plan.deriv(s.w2, 2);
  LinearState base = shallow_water_part(s.zeta, s.u, s.v, &vort, ctx);
  auto [d1, d2] = rotation_transport_rhs(s.w1, s.w2, s.u, ctx);
  return BoussinesqState{std::move(base.zeta), std::move(base.u), std::move(base.v), std::move(d1), std::move(d2)};
}

LinearState weak_rotation_rhs(const LinearState& s, const ModelContext& ctx) {
  return shallow_water_part(s.zeta, s.u, s.v, nullptr, ctx);
}

// ---------------------------------------------------------------------------

Field long_wave_nonlinearity(const Field& k, const SpectralPlan& plan) {
  return -1.5 * plan.product(k, plan.deriv(k));
}

Field kdv_rhs(const ScalarWave& w, const SpectralPlan& plan) {
  Field out = long_wave_nonlinearity(w.k, plan);
  out.add_scaled(-1.0 / 6.0, plan.deriv(w.k, 3));
  return out;
}

Field ostrovsky_rhs(const ScalarWave& w, const SpectralPlan& plan) {
  const Field anti = plan.antideriv(w.k);
  Field out = kdv_rhs(w, plan);
  out.add_scaled(0.5, anti);
  return out;
}

LinearSymbol kdv_symbol(const SpectralPlan& plan) {
  LinearSymbol sym;
  sym.multipliers.resize(plan.modes());
  for (std::size_t m = 0; m < plan.modes(); ++m) {
    const double xi = plan.wavenumber(m);
    sym.multipliers[m] = {0.0, xi * xi * xi / 6.0};
  }
  sym.multipliers.back() = 0.0;
  return sym;
}

LinearSymbol ostrovsky_symbol(const SpectralPlan& plan) {
  LinearSymbol sym = kdv_symbol(plan);
  sym.requires_zero_mean = true;
  sym.multipliers[0] = 0.0;
  for (std::size_t m = 1; m + 1 < plan.modes(); ++m) sym.multipliers[m] += std::complex<double>(0.0, -0.5 / plan.wavenumber(m));
  return sym;
}

// ---------------------------------------------------------------------------

std::array<std::complex<double>, 9> poincare_generator(double xi) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  return {C(0.0), -i * xi, C(0.0),  //
          -i * xi, C(0.0), C(1.0),  //
          C(0.0), C(-1.0), C(0.0)};
}

std::array<std::complex<double>, 9> poincare_propagator(double t, double xi) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double q = xi * xi + 1.0;
  const double w = std::sqrt(q);
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  return {C((xi * xi * c + 1.0) / q), -i * xi * s / w, i * xi * (c - 1.0) / q,  //
          -i * xi * s / w, C(c), C(s / w),                                     //
          -i * xi * (c - 1.0) / q, C(-s / w), C((xi * xi + c) / q)};
}

LinearState poincare_semigroup(const LinearState& s0, double t, const SpectralPlan& plan) {
  Spectrum z = plan.forward(s0.zeta);
  Spectrum u = plan.forward(s0.u);
  Spectrum v = plan.forward(s0.v);
  for (std::size_t m = 0; m < plan.modes(); ++m) {
    const auto S = poincare_propagator(t, plan.wavenumber(m));
    const auto zm = z[m], um = u[m], vm = v[m];
    z[m] = S[0] * zm + S[1] * um + S[2] * vm;
    u[m] = S[3] * zm + S[4] * um + S[5] * vm;
    v[m] = S[6] * zm + S[7] * um + S[8] * vm;
  }
  z.back() = u.back() = v.back() = 0.0;
  return LinearState{plan.inverse(std::move(z)), plan.inverse(std::move(u)), plan.inverse(std::move(v))};
}

GeostrophicResidual geostrophic_residual(const LinearState& s, const SpectralPlan& plan) {
  GeostrophicResidual r;
  r.residual = s.zeta - plan.deriv(s.v);
  r.norm = l2_norm(r.residual, plan.grid());
  return r;
}

double geostrophic_residual_modal(const LinearState& s, const SpectralPlan& plan) {
  const Spectrum z = plan.forward(s.zeta);
  const Spectrum v = plan.forward(s.v);
  const std::complex<double> i(0.0, 1.0);
  Spectrum r(plan.modes());
  for (std::size_t m = 0; m < plan.modes(); ++m) {
    // Odd-order symbols vanish on the Nyquist mode.
    const double xi = (m + 1 == plan.modes()) ? 0.0 : plan.wavenumber(m);
    const double q = xi * xi + 1.0;
    // First row of the projection onto the non-Poincare part, scaled back by (xi^2 + 1).
    const std::complex<double> projected = z[m] / q - i * xi * v[m] / q;
    r[m] = projected * q;
  }
  return std::sqrt(spectral_energy(r, plan.grid()));
}

}  // namespace rsw
