#include <cmath>

#include <gtest/gtest.h>

#include "rsw/error.hpp"
#include "rsw/invariants.hpp"
#include "rsw/models.hpp"
#include "rsw/studies.hpp"

using namespace rsw;

namespace {

StudyPoint power_law(double mu, double p, double c = 2.0) {
  StudyPoint pt;
  pt.mu = mu;
  pt.error = c * std::pow(mu, p);
  return pt;
}

const std::vector<double> kMus{0.2, 0.1, 0.05, 0.025};

}  // namespace

TEST(Slope, ExactPowerLaw) {
  std::vector<double> e;
  for (double mu : kMus) e.push_back(3.0 * std::pow(mu, 0.75));
  EXPECT_NEAR(fit_slope(kMus, e), 0.75, 1e-12);
}

TEST(Slope, NeedsThreePoints) {
  try {
    fit_slope({0.1, 0.05}, {1.0, 0.5});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("need ≥ 3 mu values"), std::string::npos);
  }
}

TEST(ErrorStudy, PassesInsideBand) {
  const auto r = run_error_study("synthetic", kMus, [](double mu) { return power_law(mu, 1.0); }, {});
  EXPECT_EQ(r.status, StudyStatus::Ok);
  EXPECT_NEAR(r.fitted_slope, 1.0, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.errors.size(), 4u);
}

TEST(ErrorStudy, FailsOutsideBandAndStrictBound) {
  ErrorStudyOptions o;
  o.band = {0.75, 0.7, 10.0, 0.5};
  EXPECT_FALSE(run_error_study("s", kMus, [](double mu) { return power_law(mu, 0.5); }, o).pass);
  EXPECT_TRUE(run_error_study("s", kMus, [](double mu) { return power_law(mu, 0.75); }, o).pass);
  o.band.lower = 0.4;
  EXPECT_FALSE(run_error_study("s", kMus, [](double mu) { return power_law(mu, 0.5); }, o).pass);
}

TEST(ErrorStudy, IdenticalModelsAreDegenerate) {
  const auto r = run_error_study("same", kMus, [](double mu) { return power_law(mu, 1.0, 1e-17); }, {});
  EXPECT_EQ(r.status, StudyStatus::Degenerate);
  EXPECT_TRUE(r.pass);
}

TEST(ErrorStudy, UnresolvedPointsAreExcluded) {
  auto fn = [](double mu) {
    StudyPoint p = power_law(mu, 1.0);
    p.error_refined_n = p.error * (mu < 0.04 ? 1.2 : 1.01);
    return p;
  };
  const auto r = run_error_study("s", kMus, fn, {});
  EXPECT_FALSE(r.points[3].included);
  EXPECT_NE(r.points[3].note.find("n-doubling"), std::string::npos);
  EXPECT_EQ(r.status, StudyStatus::Ok);

  auto all_bad = [](double mu) {
    StudyPoint p = power_law(mu, 1.0);
    p.error_refined_dt = 2.0 * p.error;
    return p;
  };
  const auto bad = run_error_study("s", kMus, all_bad, {});
  EXPECT_EQ(bad.status, StudyStatus::UnderResolved);
  EXPECT_FALSE(bad.pass);
}

TEST(ErrorStudy, LargestMuMayBePreAsymptotic) {
  auto fn = [](double mu) {
    StudyPoint p = power_law(mu, 1.0);
    if (mu == 0.2) p.error = 0.1;
    return p;
  };
  const auto r = run_error_study("s", kMus, fn, {});
  EXPECT_FALSE(r.points[0].included);
  EXPECT_NEAR(r.fitted_slope, 1.0, 1e-12);
}

TEST(ErrorStudy, ThreadedRunKeepsInputOrder) {
  ErrorStudyOptions o;
  o.threads = 3;
  const auto r = run_error_study("s", kMus, [](double mu) { return power_law(mu, 2.0); }, o);
  for (std::size_t i = 0; i < kMus.size(); ++i) EXPECT_EQ(r.points[i].mu, kMus[i]);
  EXPECT_NEAR(r.fitted_slope, 2.0, 1e-12);
}

TEST(Reduction, GnToBoussinesqIsSecondOrder) {
  const auto r = reduction_residual_study(ReductionStudyConfig{ReductionPair::GNToBouss});
  EXPECT_TRUE(r.pass) << r.fitted_slope;
  EXPECT_NEAR(r.fitted_slope, 2.0, 0.3);
}

TEST(Reduction, BoussinesqToWeakRotationIsSecondOrder) {
  const auto r = reduction_residual_study(ReductionStudyConfig{ReductionPair::BoussToWeak});
  EXPECT_TRUE(r.pass) << r.fitted_slope;
  EXPECT_NEAR(r.fitted_slope, 2.0, 0.3);
}

TEST(Reduction, GnMediumToWeakRotation) {
  const auto r = reduction_residual_study(ReductionStudyConfig{ReductionPair::GNMediumToWeak});
  EXPECT_TRUE(r.pass) << r.fitted_slope;
  EXPECT_NEAR(r.fitted_slope, 1.5, 0.3);
}

TEST(Reduction, RestStateIsDegenerate) {
  ReductionStudyConfig c{ReductionPair::GNToBouss};
  c.amplitude = 0.0;
  EXPECT_EQ(reduction_residual_study(c).status, StudyStatus::Degenerate);
}

TEST(Reduction, PairNames) {
  for (auto p : {ReductionPair::GNToBouss, ReductionPair::BoussToWeak, ReductionPair::GNMediumToWeak})
    EXPECT_EQ(parse_reduction_pair(to_string(p)), p);
}

TEST(Decay, ExponentNearOneHalf) {
  const SpectralPlan plan(Grid1D(2048, 800.0));
  const LinearState s{Field(2048), gaussian(plan.grid(), 1.0, 1.0), Field(2048)};
  const auto d = decay_study(s, log_spaced(5.0, 100.0, 64), plan);
  EXPECT_EQ(d.status, StudyStatus::Ok);
  EXPECT_GE(d.exponent, 0.4);
  EXPECT_LE(d.exponent, 0.6);
  EXPECT_EQ(d.times.size(), 64u);
}

TEST(Decay, DomainTooSmallRejected) {
  const SpectralPlan plan(Grid1D(512, 200.0));
  const LinearState s{Field(512), gaussian(plan.grid(), 1.0, 1.0), Field(512)};
  EXPECT_THROW(decay_study(s, log_spaced(5.0, 100.0, 8), plan), DomainTooSmall);
  const LinearState wide{Field(512), gaussian(plan.grid(), 1.0, 30.0), Field(512)};
  EXPECT_THROW(decay_study(wide, log_spaced(1.0, 40.0, 8), plan), DomainTooSmall);
}

TEST(Decay, ZeroDataIsDegenerate) {
  const SpectralPlan plan(Grid1D(256, 100.0));
  EXPECT_EQ(decay_study(zero_state<LinearState>(256), log_spaced(1.0, 20.0, 8), plan).status,
            StudyStatus::Degenerate);
}

TEST(Decay, LogSpacing) {
  const auto t = log_spaced(1.0, 100.0, 3);
  EXPECT_NEAR(t[1], 10.0, 1e-12);
  EXPECT_NEAR(t[2], 100.0, 1e-12);
  EXPECT_THROW(log_spaced(0.0, 1.0, 4), ValidationError);
}

TEST(Approximation, DefaultBands) {
  EXPECT_EQ(default_band(RegimeTag::KdV).lower, 0.75);
  EXPECT_EQ(default_band(RegimeTag::KdV).upper, 1.25);
  EXPECT_EQ(default_band(RegimeTag::Ost).lower, 0.7);
  EXPECT_EQ(default_band(RegimeTag::Poin).lower, 0.7);
  EXPECT_EQ(default_band(RegimeTag::Poin).strictly_above, 0.5);
  EXPECT_EQ(default_band(ReductionPair::GNToBouss).target, 2.0);
}

TEST(Approximation, ErrorShrinksWithMu) {
  ApproximationStudyConfig c;
  c.regime = RegimeTag::KdV;
  c.n = 256;
  c.length = 96.0;
  const double e1 = approximation_error(c, 0.2, c.n, 1.0).error;
  const double e2 = approximation_error(c, 0.1, c.n, 1.0).error;
  EXPECT_GT(e1, 0.0);
  EXPECT_LT(e2, e1);
}

// ---------------------------------------------------------------------------
// Invariants
// ---------------------------------------------------------------------------

TEST(Invariants, ExtraNames) {
  for (auto e : {Extra::WMax, Extra::GeoResidual, Extra::Mean}) EXPECT_EQ(parse_extra(column_name(e)), e);
  EXPECT_THROW(parse_extra("vorticity"), ConfigError);
}

TEST(Invariants, MonitorFlagsDrift) {
  InvariantMonitor m(64, true);
  Observables o;
  o.mass = 1.0;
  o.l2 = 2.0;
  m.record(0.0, o);
  o.l2 = 2.0 * (1 + 1e-7);
  m.record(1.0, o);
  EXPECT_TRUE(m.drift_flags().empty());
  o.l2 = 2.0 * (1 + 1e-5);
  o.mass = 1.1;
  m.record(2.0, o);
  EXPECT_EQ(m.drift_flags().size(), 2u);
  EXPECT_NEAR(m.max_mass_drift(), 0.1, 1e-12);
  EXPECT_NEAR(m.max_l2_rel_drift(), 1e-5, 1e-12);
}

TEST(Invariants, ScalarObservables) {
  const SpectralPlan plan(Grid1D(256, 40.0));
  const Field k = sech2(plan.grid(), 2.0, 1.0);
  const auto o = observe(ScalarWave{k}, WaveModel::KdV, plan);
  // int sech^2 = 2, int sech^4 = 4/3, int sech^6 = 16/15, int (sech^2)'^2 = 16/15.
  EXPECT_NEAR(o.mass, 4.0, 1e-10);
  EXPECT_NEAR(o.l2, std::sqrt(4.0 * 4.0 / 3.0), 1e-10);
  EXPECT_NEAR(o.linf, 2.0, 1e-3);
  EXPECT_NEAR(o.energy, -8.0 / 4.0 * 16.0 / 15.0 + 4.0 / 12.0 * 16.0 / 15.0, 1e-10);
  EXPECT_TRUE(std::isnan(o.w_max));
}

TEST(Invariants, LinearEnergyIsHalfSquaredNorm) {
  const SpectralPlan plan(Grid1D(128, 40.0));
  const auto& g = plan.grid();
  const LinearState s{gaussian(g, 1, 2), gaussian(g, 0.5, 1), Field(g.n())};
  const auto o = observe_linear(s, plan);
  EXPECT_NEAR(o.energy, 0.5 * o.l2 * o.l2, 1e-12);
  EXPECT_NEAR(o.geo_residual, geostrophic_residual(s, plan).norm, 1e-14);
}

TEST(Invariants, BoussinesqWMax) {
  const SpectralPlan plan(Grid1D(128, 40.0));
  const auto& g = plan.grid();
  const ModelContext ctx(regime_params(RegimeTag::Bouss, 0.1), plan);
  BoussinesqState s = zero_state<BoussinesqState>(g.n());
  s.w1 = Field(g.n(), 3.0);
  s.w2 = Field(g.n(), 4.0);
  EXPECT_NEAR(observe(s, ctx).w_max, 5.0, 1e-14);
}
