#include "rsw/gn.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rsw/error.hpp"

namespace rsw {

SymTensor2 rotation_part(const SymTensor2& e) { return {-2.0 * e.xy, e.xx - e.yy, 2.0 * e.xy}; }

SymTensor2 stretching(const SymTensor2& e, double ux, double vx) {
  return {3.0 * ux * e.xx + 2.0 * vx * e.xy, 2.0 * ux * e.xy + vx * e.yy, ux * e.yy};
}

SymTensor2 vorticity_source(double u_sharp, double v_sharp, double uxx) {
  return {0.0, uxx * u_sharp, 2.0 * uxx * v_sharp};
}

std::array<double, 8> unfold(const SymTensor3& f) {
  // Number of y indices selects the component.
  const double by_count[4] = {f.f111, f.f112, f.f122, f.f222};
  std::array<double, 8> out{};
  for (int idx = 0; idx < 8; ++idx) out[idx] = by_count[((idx >> 2) & 1) + ((idx >> 1) & 1) + (idx & 1)];
  return out;
}

namespace {

constexpr int flat(int i, int j, int k) { return 4 * i + 2 * j + k; }
// Zero-based: s(0) = -1, s(1) = +1, f(i) = 1 - i.
constexpr double sign_of(int i) { return i == 0 ? -1.0 : 1.0; }

}  // namespace

std::array<double, 8> rotation_part(const std::array<double, 8>& f) {
  std::array<double, 8> out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        out[flat(i, j, k)] = sign_of(i) * f[flat(1 - i, j, k)] + sign_of(j) * f[flat(i, 1 - j, k)] +
                             sign_of(k) * f[flat(i, j, 1 - k)];
  return out;
}

SymTensor3 rotation_part(const SymTensor3& f) {
  return {-3.0 * f.f112, f.f111 - 2.0 * f.f122, 2.0 * f.f112 - f.f222, 3.0 * f.f122};
}

// ---------------------------------------------------------------------------

namespace {

double dot(const Field& a, const Field& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

Field cube(const Field& h) { return h * h * h; }

// h a - mu/3 d_x(h^3 d_x a)
Field symmetric_operator(const Field& a, const Field& h, const Field& h3, double mu, const SpectralPlan& plan) {
  Field out = h * a;
  out.add_scaled(-mu / 3.0, plan.deriv(h3 * plan.deriv(a)));
  return out;
}

}  // namespace

Field apply_one_plus_mu_t(const Field& a, const Field& h, double mu, const SpectralPlan& plan) {
  return symmetric_operator(a, h, cube(h), mu, plan) / h;
}

Field solve_one_plus_mu_t(const Field& r, const Field& h, double mu, const SpectralPlan& plan,
                          const EllipticSolveOptions& options, int* iterations) {
  if (iterations) *iterations = 0;
  if (mu == 0.0) return r;
  const Field h3 = cube(h);
  const Field b = h * r;
  const double b_norm = std::sqrt(dot(b, b));
  Field x(r.size());
  if (b_norm == 0.0) return x;

  const double h_bar = h.mean();
  auto precondition = [&](const Field& res) {
    return plan.invert_one_minus_mu3_dxx(res, mu * h_bar * h_bar) * (1.0 / h_bar);
  };

  Field res = b;
  Field z = precondition(res);
  Field p = z;
  double rz = dot(res, z);
  for (int it = 1; it <= options.max_iter; ++it) {
    const Field ap = symmetric_operator(p, h, h3, mu, plan);
    const double alpha = rz / dot(p, ap);
    x.add_scaled(alpha, p);
    res.add_scaled(-alpha, ap);
    const double res_norm = std::sqrt(dot(res, res));
    if (!std::isfinite(res_norm)) break;
    if (res_norm <= options.rel_tol * b_norm) {
      if (iterations) *iterations = it;
      return x;
    }
    z = precondition(res);
    const double rz_next = dot(res, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    p *= beta;
    p += z;
  }
  throw EllipticSolveFailure("(1 + mu T) solve did not reach relative residual " + std::to_string(options.rel_tol) +
                             " in " + std::to_string(options.max_iter) + " iterations");
}

// ---------------------------------------------------------------------------

namespace {

struct Kinematics {
  Field h, h3, ux, uxx, vx;
};

Kinematics kinematics(const Field& zeta, const Field& u, const Field& v, const ModelContext& ctx) {
  Kinematics k;
  k.h = water_depth(zeta, ctx);
  k.h3 = cube(k.h);
  k.ux = ctx.plan.deriv(u);
  k.uxx = ctx.plan.deriv(u, 2);
  k.vx = ctx.plan.deriv(v);
  return k;
}

// -eps u E_x - eps l(E, d_x V) - (eps/Ro) E^S, component-wise and dealiased.
std::array<Field, 3> e_transport_rotation(const Field& u, const Field& exx, const Field& exy, const Field& eyy,
                                          const Kinematics& k, const ModelContext& ctx) {
  const auto& plan = ctx.plan;
  const double eps = ctx.params.eps, ir = ctx.params.inv_ro;
  const Field exx_x = plan.deriv(exx), exy_x = plan.deriv(exy), eyy_x = plan.deriv(eyy);
  std::array<Field, 3> out{Field(u.size()), Field(u.size()), Field(u.size())};
  for (std::size_t j = 0; j < u.size(); ++j) {
    const SymTensor2 e{exx[j], exy[j], eyy[j]};
    const SymTensor2 l = stretching(e, k.ux[j], k.vx[j]);
    out[0][j] = u[j] * exx_x[j] + l.xx;
    out[1][j] = u[j] * exy_x[j] + l.xy;
    out[2][j] = u[j] * eyy_x[j] + l.yy;
  }
  for (auto& f : out) f = -eps * plan.dealias(f);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const SymTensor2 es = rotation_part(SymTensor2{exx[j], exy[j], eyy[j]});
    out[0][j] -= ir * es.xx;
    out[1][j] -= ir * es.xy;
    out[2][j] -= ir * es.yy;
  }
  return out;
}

}  // namespace

std::array<Field, 4> f_equation_rhs(const GNState& s, const ModelContext& ctx) {
  const auto& plan = ctx.plan;
  const double eps = ctx.params.eps, ir = ctx.params.inv_ro;
  const Field ux = plan.deriv(s.u), vx = plan.deriv(s.v);
  const Field f1x = plan.deriv(s.f_111), f2x = plan.deriv(s.f_112), f3x = plan.deriv(s.f_122),
              f4x = plan.deriv(s.f_222);
  const std::size_t n = s.u.size();
  std::array<Field, 4> out{Field(n), Field(n), Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double u = s.u[j], a = ux[j], b = vx[j];
    const double f1 = s.f_111[j], f2 = s.f_112[j], f3 = s.f_122[j], f4 = s.f_222[j];
    out[0][j] = u * f1x[j] + 4.0 * a * f1;
    out[1][j] = u * f2x[j] + 3.0 * a * f2 + f1 * b;
    out[2][j] = u * f3x[j] + 2.0 * a * f3 + 2.0 * f2 * b;
    out[3][j] = u * f4x[j] + a * f4 + 3.0 * f3 * b;
  }
  for (auto& f : out) f = -eps * plan.dealias(f);
  out[0].add_scaled(3.0 * ir, s.f_112);
  out[1].add_scaled(-ir, s.f_111);
  out[1].add_scaled(2.0 * ir, s.f_122);
  out[2].add_scaled(-2.0 * ir, s.f_112);
  out[2].add_scaled(ir, s.f_222);
  out[3].add_scaled(-3.0 * ir, s.f_122);
  return out;
}

std::array<Field, 8> f_equation_rhs_unfolded(const GNState& s, const ModelContext& ctx) {
  const auto& plan = ctx.plan;
  const double eps = ctx.params.eps, ir = ctx.params.inv_ro;
  const std::size_t n = s.u.size();
  const std::array<Field, 2> dv{plan.deriv(s.u), plan.deriv(s.v)};

  std::array<Field, 8> f, fx, transport;
  for (int idx = 0; idx < 8; ++idx) {
    f[idx] = Field(n);
    transport[idx] = Field(n);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto comps = unfold(SymTensor3{s.f_111[j], s.f_112[j], s.f_122[j], s.f_222[j]});
    for (int idx = 0; idx < 8; ++idx) f[idx][j] = comps[idx];
  }
  for (int idx = 0; idx < 8; ++idx) fx[idx] = plan.deriv(f[idx]);

  for (std::size_t p = 0; p < n; ++p) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const int ijk = flat(i, j, k);
          transport[ijk][p] = s.u[p] * fx[ijk][p] + dv[0][p] * f[ijk][p] + f[flat(0, k, j)][p] * dv[i][p] +
                              f[flat(i, 0, k)][p] * dv[j][p] + f[flat(i, j, 0)][p] * dv[k][p];
        }
  }
  std::array<Field, 8> out;
  for (int idx = 0; idx < 8; ++idx) out[idx] = -eps * plan.dealias(transport[idx]);
  for (std::size_t p = 0; p < n; ++p) {
    std::array<double, 8> local{};
    for (int idx = 0; idx < 8; ++idx) local[idx] = f[idx][p];
    const auto fs = rotation_part(local);
    for (int idx = 0; idx < 8; ++idx) out[idx][p] -= ir * fs[idx];
  }
  return out;
}

GNState gn_rhs(const GNState& s, const ModelContext& ctx, const EllipticSolveOptions& options) {
  const auto& plan = ctx.plan;
  const auto& prm = ctx.params;
  const double eps = prm.eps, ir = prm.inv_ro, mu = prm.mu;
  const double mu32 = std::pow(mu, 1.5), smu = std::sqrt(mu);
  const Kinematics k = kinematics(s.zeta, s.u, s.v, ctx);
  const Field inv_h = constant_field(k.h.size(), 1.0) / k.h;

  GNState d;
  d.zeta = -plan.deriv(plan.product(k.h, s.u));

  // u: elliptic solve for (1 + mu T)(u_t + eps u u_x).
  const Field q = (2.0 / 3.0) * inv_h * plan.deriv(plan.dealias(k.h3 * k.ux * k.ux));
  const Field h3us = plan.dealias(k.h3 * s.vs1);
  const Field c1 =
      (-1.0 / 6.0) * inv_h * plan.deriv(plan.dealias(2.0 * h3us * k.uxx + plan.deriv(h3us) * k.ux));
  const Field vort = (mu32 / 24.0) * inv_h * plan.deriv(plan.dealias(k.h3 * s.vs2), 2);
  Field r = -plan.deriv(s.zeta);
  r.add_scaled(ir, s.v);
  r.add_scaled(-eps * mu, q);
  r.add_scaled(-eps * mu, plan.deriv(s.e_xx));
  r.add_scaled(-eps * mu32, c1);
  r.add_scaled(-ir, vort);
  d.u = solve_one_plus_mu_t(r, k.h, mu, plan, options);
  d.u.add_scaled(-eps, plan.product(s.u, k.ux));

  const Field c2 = (-1.0 / 24.0) * inv_h * plan.deriv(plan.dealias(k.h3 * s.vs2 * k.uxx));
  d.v = -eps * plan.product(s.u, k.vx);
  d.v.add_scaled(-ir, s.u);
  d.v.add_scaled(-eps * mu, plan.deriv(s.e_xy));
  d.v.add_scaled(-eps * mu32, c2);

  d.vs1 = -eps * plan.dealias(s.vs1 * k.ux + s.u * plan.deriv(s.vs1));
  d.vs2 = -eps * plan.dealias(s.vs2 * k.ux + s.u * plan.deriv(s.vs2));
  d.vs1.add_scaled(ir, s.vs2);
  d.vs2.add_scaled(-ir, s.vs1);

  auto e = e_transport_rotation(s.u, s.e_xx, s.e_xy, s.e_yy, k, ctx);
  // Slice F_{., ., 1}.
  e[0].add_scaled(-eps * smu, plan.deriv(s.f_111));
  e[1].add_scaled(-eps * smu, plan.deriv(s.f_112));
  e[2].add_scaled(-eps * smu, plan.deriv(s.f_122));
  Field coeff = eps * smu * k.vx;
  coeff += ir * smu;
  const Field src_xy = plan.dealias(coeff * k.uxx * s.vs1);
  const Field src_yy = plan.dealias(coeff * k.uxx * s.vs2) * 2.0;
  e[1] += src_xy;
  e[2] += src_yy;
  d.e_xx = std::move(e[0]);
  d.e_xy = std::move(e[1]);
  d.e_yy = std::move(e[2]);

  auto f = f_equation_rhs(s, ctx);
  d.f_111 = std::move(f[0]);
  d.f_112 = std::move(f[1]);
  d.f_122 = std::move(f[2]);
  d.f_222 = std::move(f[3]);
  return d;
}

GNMediumState gn_medium_rhs(const GNMediumState& s, const ModelContext& ctx, const EllipticSolveOptions& options) {
  const auto& plan = ctx.plan;
  const double eps = ctx.params.eps, ir = ctx.params.inv_ro, mu = ctx.params.mu;
  const Kinematics k = kinematics(s.zeta, s.u, s.v, ctx);

  GNMediumState d;
  d.zeta = -plan.deriv(plan.product(k.h, s.u));

  const Field q = (2.0 / 3.0) * plan.deriv(plan.dealias(k.h3 * k.ux * k.ux)) / k.h;
  Field r = -plan.deriv(s.zeta);
  r.add_scaled(ir, s.v);
  r.add_scaled(-eps * mu, q);
  r.add_scaled(-eps * mu, plan.deriv(s.e_xx));
  d.u = solve_one_plus_mu_t(r, k.h, mu, plan, options);
  d.u.add_scaled(-eps, plan.product(s.u, k.ux));

  d.v = -eps * plan.product(s.u, k.vx);
  d.v.add_scaled(-ir, s.u);
  d.v.add_scaled(-eps * mu, plan.deriv(s.e_xy));

  auto e = e_transport_rotation(s.u, s.e_xx, s.e_xy, s.e_yy, k, ctx);
  d.e_xx = std::move(e[0]);
  d.e_xy = std::move(e[1]);
  d.e_yy = std::move(e[2]);
  return d;
}

}  // namespace rsw
