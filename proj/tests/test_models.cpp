#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "rsw/error.hpp"
#include "rsw/models.hpp"
#include "rsw/studies.hpp"
#include "rsw/timeint.hpp"

using namespace rsw;
using C = std::complex<double>;
using Mat3 = std::array<C, 9>;

namespace {

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
  return c;
}

// exp(t A) by scaling and squaring of a truncated Taylor series.
Mat3 expm(const Mat3& a, double t) {
  int squarings = 0;
  double norm = 0.0;
  for (const auto& x : a) norm = std::max(norm, std::abs(x) * std::abs(t));
  while (norm > 0.1) {
    norm /= 2;
    ++squarings;
  }
  Mat3 scaled;
  for (int i = 0; i < 9; ++i) scaled[i] = a[i] * (t / std::pow(2.0, squarings));
  Mat3 result{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Mat3 term = result;
  for (int k = 1; k < 30; ++k) {
    term = matmul(term, scaled);
    for (auto& x : term) x /= static_cast<double>(k);
    for (int i = 0; i < 9; ++i) result[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

Field random_smooth(const SpectralPlan& plan, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Field f(plan.n());
  for (auto& x : f) x = dist(rng);
  // Keep only the resolved band so that all operators act exactly.
  return plan.dealias(f);
}

LinearState random_linear(const SpectralPlan& plan, unsigned seed) {
  return {random_smooth(plan, seed), random_smooth(plan, seed + 1), random_smooth(plan, seed + 2)};
}

double linear_l2(const LinearState& s, const SpectralPlan& plan) {
  const auto& g = plan.grid();
  return std::sqrt(std::pow(l2_norm(s.zeta, g), 2) + std::pow(l2_norm(s.u, g), 2) + std::pow(l2_norm(s.v, g), 2));
}

double linear_diff(const LinearState& a, const LinearState& b) {
  return std::max({max_abs_diff(a.zeta, b.zeta), max_abs_diff(a.u, b.u), max_abs_diff(a.v, b.v)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear Poincare system
// ---------------------------------------------------------------------------

TEST(Poincare, GeneratorIsSkewHermitian) {
  for (double xi : {0.0, 0.3, 1.0, 7.5, -2.0}) {
    const Mat3 a = poincare_generator(xi);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(a[3 * i + j] + std::conj(a[3 * j + i])), 1e-15);
  }
}

TEST(Poincare, PropagatorMatchesMatrixExponential) {
  for (double xi : {0.0, 0.5, 1.0, 3.0}) {
    for (double t : {0.1, 1.0, 7.3}) {
      const Mat3 exact = expm(poincare_generator(xi), t);
      const Mat3 closed = poincare_propagator(t, xi);
      for (int i = 0; i < 9; ++i) EXPECT_LT(std::abs(exact[i] - closed[i]), 1e-11) << xi << " " << t << " " << i;
    }
  }
}

TEST(Poincare, PropagatorIsUnitary) {
  const Mat3 s = poincare_propagator(4.2, 1.7);
  Mat3 sh;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sh[3 * i + j] = std::conj(s[3 * j + i]);
  const Mat3 id = matmul(sh, s);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(id[3 * i + j] - (i == j ? 1.0 : 0.0)), 1e-14);
}

TEST(Poincare, IdentityAtTimeZero) {
  const SpectralPlan plan(Grid1D(256, 50.0));
  const LinearState s0 = random_linear(plan, 5);
  EXPECT_LT(linear_diff(poincare_semigroup(s0, 0.0, plan), s0), 1e-14);
}

TEST(Poincare, SemigroupProperty) {
  const SpectralPlan plan(Grid1D(256, 50.0));
  const LinearState s0 = random_linear(plan, 9);
  const auto composed = poincare_semigroup(poincare_semigroup(s0, 2.5, plan), 4.0, plan);
  EXPECT_LT(linear_diff(composed, poincare_semigroup(s0, 6.5, plan)), 1e-12);
}

TEST(Poincare, SpectralNormConserved) {
  const SpectralPlan plan(Grid1D(256, 50.0));
  const LinearState s0 = random_linear(plan, 13);
  const double n0 = linear_l2(s0, plan);
  for (double t : {1.0, 10.0, 33.3, 50.0})
    EXPECT_LT(std::abs(linear_l2(poincare_semigroup(s0, t, plan), plan) - n0), 1e-12 * n0) << t;
}

TEST(Poincare, SolvesTheLinearSystem) {
  // Time derivative by central differences matches the PDE right-hand side.
  const SpectralPlan plan(Grid1D(128, 40.0));
  const auto& g = plan.grid();
  const LinearState s0{gaussian(g, 1, 2), gaussian_d1(g, 0.5, 2), gaussian(g, 0.3, 3)};
  const double t = 1.3, h = 1e-4;
  const auto sp = poincare_semigroup(s0, t + h, plan), sm = poincare_semigroup(s0, t - h, plan);
  const auto s = poincare_semigroup(s0, t, plan);
  const Field dz = (sp.zeta - sm.zeta) * (0.5 / h);
  const Field du = (sp.u - sm.u) * (0.5 / h);
  const Field dv = (sp.v - sm.v) * (0.5 / h);
  EXPECT_LT(max_abs_diff(dz, -plan.deriv(s.u)), 1e-7);
  EXPECT_LT(max_abs_diff(du, s.v - plan.deriv(s.zeta)), 1e-7);
  EXPECT_LT(max_abs_diff(dv, -s.u), 1e-7);
}

TEST(Poincare, GeostrophicConditionPropagates) {
  const SpectralPlan plan(Grid1D(512, 100.0));
  const auto& g = plan.grid();
  const Field v0 = gaussian(g, 1.0, 2.0);
  const LinearState s0{plan.deriv(v0), gaussian_d1(g, 0.7, 3.0), v0};
  EXPECT_LT(geostrophic_residual(s0, plan).norm, 1e-12);
  for (double t : {0.5, 5.0, 20.0, 50.0}) {
    const auto s = poincare_semigroup(s0, t, plan);
    EXPECT_LT(geostrophic_residual(s, plan).norm, 1e-10) << t;
    EXPECT_LT(geostrophic_residual_modal(s, plan), 1e-10) << t;
  }
}

TEST(Poincare, ModalResidualAgreesWithDirect) {
  const SpectralPlan plan(Grid1D(128, 30.0));
  const LinearState s = random_linear(plan, 21);
  const double direct = geostrophic_residual(s, plan).norm;
  EXPECT_NEAR(geostrophic_residual_modal(s, plan), direct, 1e-10 * direct);
}

// ---------------------------------------------------------------------------
// Boussinesq-Coriolis and weak rotation
// ---------------------------------------------------------------------------

TEST(Boussinesq, DepthBelowMinimumThrows) {
  const SpectralPlan plan(Grid1D(64, 20.0));
  DimensionlessParams p = regime_params(RegimeTag::Bouss, 0.5);
  const ModelContext ctx(p, plan);
  BoussinesqState s = zero_state<BoussinesqState>(64);
  s.zeta = Field(64, -1.9);
  EXPECT_THROW(boussinesq_rhs(s, ctx), NonPositiveDepth);
}

TEST(Boussinesq, RestStateIsSteady) {
  const SpectralPlan plan(Grid1D(64, 20.0));
  const ModelContext ctx(regime_params(RegimeTag::Bouss, 0.1), gaussian(plan.grid(), 1, 2), plan);
  const auto d = boussinesq_rhs(zero_state<BoussinesqState>(64), ctx);
  for_each_field(d, [](const Field& f) { EXPECT_EQ(f.max_abs(), 0.0); });
}

TEST(Boussinesq, MassConserved) {
  const SpectralPlan plan(Grid1D(256, 60.0));
  const auto& g = plan.grid();
  const ModelContext ctx(regime_params(RegimeTag::Bouss, 0.1), gaussian(g, 1, 4), plan);
  BoussinesqState s{gaussian(g, 1, 2), gaussian_d1(g, 0.5, 2), gaussian(g, 0.2, 3), gaussian(g, 0.3, 2),
                    gaussian_d1(g, 0.3, 2)};
  const double m0 = integrate(s.zeta, g);
  for (int i = 0; i < 200; ++i) s = rk4_step([&](const BoussinesqState& y) { return boussinesq_rhs(y, ctx); }, s, 0.05);
  EXPECT_LT(std::abs(integrate(s.zeta, g) - m0), 1e-12 * static_cast<double>(g.n()));
}

TEST(Boussinesq, WMagnitudeConservedAlongCharacteristics) {
  // With u constant, |W|(x, t) = |W0|(x - eps u t).
  const SpectralPlan plan(Grid1D(256, 40.0));
  const auto& g = plan.grid();
  DimensionlessParams p = regime_params(RegimeTag::Poin, 0.2);
  const ModelContext ctx(p, plan);
  const double u0 = 0.8;
  const Field u(g.n(), u0);
  Field w1 = gaussian(g, 1.0, 2.0), w2 = gaussian_d1(g, 0.7, 1.5);
  auto mag = [](const Field& a, const Field& b) {
    Field m(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) m[j] = std::hypot(a[j], b[j]);
    return m;
  };
  struct W {
    Field a, b;
    auto fields() { return std::tie(a, b); }
    auto fields() const { return std::tie(a, b); }
  };
  W w{w1, w2};
  const double dt = 0.01, t_end = 10.0;
  for (int i = 0; i < static_cast<int>(std::lround(t_end / dt)); ++i)
    w = rk4_step(
        [&](const W& y) {
          auto [d1, d2] = rotation_transport_rhs(y.a, y.b, u, ctx);
          return W{d1, d2};
        },
        w, dt);
  const Field expect = mag(plan.shift(w1, p.eps * u0 * t_end), plan.shift(w2, p.eps * u0 * t_end));
  EXPECT_LT(max_abs_diff(mag(w.a, w.b), expect), 1e-6);
}

TEST(WeakRotation, LinearLimitMatchesSemigroupWithoutDispersion) {
  // eps = mu -> tiny and eps/Ro = 1: the weak-rotation flow approaches the linear system.
  const SpectralPlan plan(Grid1D(128, 60.0));
  const auto& g = plan.grid();
  DimensionlessParams p = regime_params(RegimeTag::Poin, 1e-8);
  const ModelContext ctx(p, plan);
  LinearState s{gaussian(g, 1, 3), Field(g.n()), Field(g.n())};
  const LinearState s0 = s;
  for (int i = 0; i < 200; ++i) s = rk4_step([&](const LinearState& y) { return weak_rotation_rhs(y, ctx); }, s, 0.01);
  EXPECT_LT(linear_diff(s, poincare_semigroup(s0, 2.0, plan)), 1e-7);
}

// ---------------------------------------------------------------------------
// Scalar long-wave equations
// ---------------------------------------------------------------------------

TEST(LongWave, OstrovskyPlaneWaveFrequency) {
  // k = cos(x - omega t) solves the linear Ostrovsky equation with omega = -xi^3/6 + 1/(2 xi).
  const SpectralPlan plan(Grid1D(32, 2.0 * M_PI));
  const auto sym = ostrovsky_symbol(plan);
  EXPECT_TRUE(sym.requires_zero_mean);
  const double omega = -sym.multipliers[1].imag();
  EXPECT_NEAR(omega, 1.0 / 3.0, 1e-10);
  EXPECT_EQ(sym.multipliers[0], C(0.0));
}

TEST(LongWave, KdvPlaneWaveFrequency) {
  const SpectralPlan plan(Grid1D(32, 2.0 * M_PI));
  EXPECT_NEAR(-kdv_symbol(plan).multipliers[1].imag(), -1.0 / 6.0, 1e-15);
  EXPECT_EQ(kdv_symbol(plan).multipliers.back(), C(0.0));
}

TEST(LongWave, SymbolMatchesLinearRhs) {
  const SpectralPlan plan(Grid1D(64, 30.0));
  const Field k = 1e-7 * gaussian_d1(plan.grid(), 1, 2);
  const auto sym = ostrovsky_symbol(plan);
  Spectrum s = plan.forward(k);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= sym.multipliers[m];
  // Quadratic part is O(1e-14) at this amplitude.
  EXPECT_LT(max_abs_diff(plan.inverse(s), ostrovsky_rhs(ScalarWave{k}, plan)), 1e-13);
}

TEST(LongWave, OstrovskyRequiresZeroMean) {
  const SpectralPlan plan(Grid1D(64, 30.0));
  EXPECT_THROW(ostrovsky_rhs(ScalarWave{gaussian(plan.grid(), 1, 2)}, plan), NonZeroMean);
  EXPECT_NO_THROW(ostrovsky_rhs(ScalarWave{gaussian_d1(plan.grid(), 1, 2)}, plan));
}

namespace {

// Functions f(s) + g(s) s' with s = sech^2(B x), represented by polynomial
// coefficients in s. Uses s'' = B^2 (4 s - 6 s^2) and s'^2 = 4 B^2 s^2 (1 - s).
struct SechExpr {
  std::vector<double> f, g;
};

std::vector<double> poly_d(const std::vector<double>& p) {
  std::vector<double> out(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return out;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_add(std::vector<double> a, const std::vector<double>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

// d/dx (f + g s') = f'(s) s' + g'(s) s'^2 + g s''.
SechExpr d_dx(const SechExpr& e, double b) {
  const double b2 = b * b;
  SechExpr out;
  out.g = poly_d(e.f);
  out.f = poly_add(poly_mul(poly_d(e.g), {0.0, 0.0, 4 * b2, -4 * b2}), poly_mul(e.g, {0.0, 4 * b2, -6 * b2}));
  return out;
}

}  // namespace

TEST(LongWave, KdvTravellingWaveCoefficientsFromSubstitution) {
  // Substituting k = A s(x - c t) into k_t + 3/2 k k' + k'''/6 = 0 gives
  // s' * [(-c A + a1) + s (a2 A^2 + a3 A)] = 0; solve for A and c.
  const double b = 0.9;
  const SechExpr k{{0.0, 1.0}, {0.0}};  // s, with A factored out
  const SechExpr k3 = d_dx(d_dx(d_dx(k, b), b), b);
  // k''' is purely odd: k''' = g3(s) s'.
  for (double c : k3.f) EXPECT_EQ(c, 0.0);
  // A s * A s' -> A^2 s s'; residual coefficient of s' is -cA + (A/6) g3_0 and of s s' is 3/2 A^2 + (A/6) g3_1.
  ASSERT_GE(k3.g.size(), 2u);
  const double amplitude = -(k3.g[1] / 6.0) / 1.5;
  const double speed = (k3.g[0] / 6.0);
  EXPECT_NEAR(amplitude, 4.0 * b * b / 3.0, 1e-14);
  EXPECT_NEAR(speed, 2.0 * b * b / 3.0, 1e-14);
  for (std::size_t i = 2; i < k3.g.size(); ++i) EXPECT_NEAR(k3.g[i], 0.0, 1e-14);

  // The discrete right-hand side of the soliton equals -c k' once the
  // product spectrum lies inside the dealiasing band.
  const SpectralPlan plan(Grid1D(1024, 80.0));
  const Field sol = sech2(plan.grid(), amplitude, 1.0 / b);
  EXPECT_LT(max_abs_diff(kdv_rhs(ScalarWave{sol}, plan), -speed * plan.deriv(sol)), 1e-10);
}

TEST(Boussinesq, ConstantTransverseVelocityDrivesOnlyU) {
  const SpectralPlan plan(Grid1D(64, 20.0));
  const DimensionlessParams p = regime_params(RegimeTag::Poin, 0.1);
  const ModelContext ctx(p, plan);
  BoussinesqState s = zero_state<BoussinesqState>(64);
  s.v = Field(64, 0.7);
  const auto d = boussinesq_rhs(s, ctx);
  const double ratio = p.inv_ro;
  EXPECT_LT(max_abs_diff(d.u, Field(64, ratio * 0.7)), 1e-14);
  EXPECT_EQ(d.zeta.max_abs(), 0.0);
  EXPECT_EQ(d.v.max_abs(), 0.0);
  EXPECT_EQ(d.w1.max_abs(), 0.0);
  EXPECT_EQ(d.w2.max_abs(), 0.0);
}

TEST(Boussinesq, ConstantWRotatesPerpendicular) {
  const SpectralPlan plan(Grid1D(64, 20.0));
  const DimensionlessParams p = regime_params(RegimeTag::Poin, 0.1);
  const ModelContext ctx(p, plan);
  const double a = 0.4, b = -1.3, ratio = p.inv_ro;
  BoussinesqState s = zero_state<BoussinesqState>(64);
  s.w1 = Field(64, a);
  s.w2 = Field(64, b);
  const auto d = boussinesq_rhs(s, ctx);
  EXPECT_LT(max_abs_diff(d.w1, Field(64, ratio * b)), 1e-14);
  EXPECT_LT(max_abs_diff(d.w2, Field(64, -ratio * a)), 1e-14);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(s.w1[j] * d.w1[j] + s.w2[j] * d.w2[j], 0.0, 1e-15);
}

TEST(Boussinesq, WSlotIsPureRotationWhenUVanishes) {
  const SpectralPlan plan(Grid1D(128, 40.0));
  const auto& g = plan.grid();
  const ModelContext ctx(regime_params(RegimeTag::Poin, 0.1), plan);
  BoussinesqState s{gaussian(g, 0.5, 2), Field(g.n()), gaussian(g, 0.2, 3), gaussian_d1(g, 1.0, 2),
                    gaussian(g, 0.8, 1.5)};
  const auto d = boussinesq_rhs(s, ctx);
  for (std::size_t j = 0; j < g.n(); ++j) EXPECT_NEAR(s.w1[j] * d.w1[j] + s.w2[j] * d.w2[j], 0.0, 1e-15);
}

TEST(WeakRotation, RestStateIsSteady) {
  const SpectralPlan plan(Grid1D(64, 20.0));
  const ModelContext ctx(regime_params(RegimeTag::Bouss, 0.1), plan);
  const auto d = weak_rotation_rhs(LinearState{Field(64), Field(64), Field(64)}, ctx);
  for_each_field(d, [](const Field& f) { EXPECT_EQ(f.max_abs(), 0.0); });
}

namespace {

// boussinesq_rhs minus weak_rotation_rhs on the shared (zeta, u, v) slots.
LinearState bouss_minus_weak(const BoussinesqState& s, const ModelContext& ctx) {
  const auto full = boussinesq_rhs(s, ctx);
  const auto weak = weak_rotation_rhs(LinearState{s.zeta, s.u, s.v}, ctx);
  return LinearState{full.zeta - weak.zeta, full.u - weak.u, full.v - weak.v};
}

BoussinesqState smooth_bouss(const Grid1D& g) {
  return BoussinesqState{gaussian(g, 0.5, 3), gaussian_d1(g, 0.4, 2.5), gaussian(g, 0.3, 2), gaussian(g, 0.6, 2),
                         gaussian_d1(g, 0.9, 2)};
}

}  // namespace

TEST(WeakRotation, DiffersFromBoussinesqByTheInvertedW2Term) {
  const SpectralPlan plan(Grid1D(256, 60.0));
  const ModelContext ctx(regime_params(RegimeTag::Poin, 0.1), plan);
  const auto& p = ctx.params;
  const BoussinesqState s = smooth_bouss(plan.grid());
  const auto diff = bouss_minus_weak(s, ctx);
  const Field term =
      -1.0 * plan.invert_one_minus_mu3_dxx((p.inv_ro) * std::pow(p.mu, 1.5) / 24.0 * plan.deriv(s.w2, 2), p.mu);
  EXPECT_LT(max_abs_diff(diff.u, term), 1e-14);
  EXPECT_EQ(diff.zeta.max_abs(), 0.0);
  EXPECT_EQ(diff.v.max_abs(), 0.0);
}

TEST(WeakRotation, DroppedTermScalesLikeMuSquared) {
  const SpectralPlan plan(Grid1D(256, 60.0));
  const BoussinesqState s = smooth_bouss(plan.grid());
  std::vector<double> mus, errs;
  for (double mu : {0.2, 0.1, 0.05}) {
    DimensionlessParams p = regime_params(RegimeTag::Poin, mu);
    p.inv_ro = std::sqrt(mu);
    mus.push_back(mu);
    errs.push_back(bouss_minus_weak(s, ModelContext(p, plan)).u.max_abs());
  }
  const double slope = std::log(errs.front() / errs.back()) / std::log(mus.front() / mus.back());
  EXPECT_NEAR(slope, 2.0, 0.1);
}

TEST(LongWave, ZeroWaveHasZeroRhs) {
  const SpectralPlan plan(Grid1D(64, 20.0));
  EXPECT_EQ(ostrovsky_rhs(ScalarWave{Field(64)}, plan).max_abs(), 0.0);
  EXPECT_EQ(kdv_rhs(ScalarWave{Field(64)}, plan).max_abs(), 0.0);
}

TEST(LongWave, KdvAndOstrovskyDifferByTheAntiderivative) {
  const SpectralPlan plan(Grid1D(256, 60.0));
  const Field k = gaussian_d1(plan.grid(), 0.8, 2.0);
  const Field diff = ostrovsky_rhs(ScalarWave{k}, plan) - kdv_rhs(ScalarWave{k}, plan);
  EXPECT_LT(max_abs_diff(diff, 0.5 * plan.antideriv(k)), 1e-14);
}

TEST(Poincare, ZeroWavenumberRotatesVelocity) {
  const SpectralPlan plan(Grid1D(32, 10.0));
  const LinearState s0{Field(32, 0.3), Field(32, 1.0), Field(32, 0.0)};
  for (double t : {0.5, 1.7, 4.0}) {
    const auto s = poincare_semigroup(s0, t, plan);
    EXPECT_LT(max_abs_diff(s.zeta, s0.zeta), 1e-14);
    const double u = s.u[0], v = s.v[0];
    EXPECT_NEAR(u * u + v * v, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(u), std::abs(std::cos(t)), 1e-14);
    EXPECT_NEAR(std::abs(v), std::abs(std::sin(t)), 1e-14);
  }
}

TEST(Poincare, GeostrophicResidualOfSine) {
  const SpectralPlan plan(Grid1D(64, 2.0 * M_PI));
  const LinearState s{sample(plan.grid(), [](double x) { return std::sin(x); }), Field(64), Field(64)};
  const auto r = geostrophic_residual(s, plan);
  EXPECT_NEAR(r.norm, std::sqrt(M_PI), 1e-12);
}
