#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "rsw/core.hpp"
#include "rsw/spectral.hpp"

namespace rsw {

/// Everything a right-hand side needs besides the state.
struct ModelContext {
  DimensionlessParams params;
  Field bathymetry;  ///< b(x); zero for flat-bottom regimes
  SpectralPlan plan;
  double h_min = 0.1;

  ModelContext(DimensionlessParams p, SpectralPlan sp, double h_min_ = 0.1)
      : params(p), bathymetry(sp.n()), plan(std::move(sp)), h_min(h_min_) {}
  ModelContext(DimensionlessParams p, Field b, SpectralPlan sp, double h_min_ = 0.1)
      : params(p), bathymetry(std::move(b)), plan(std::move(sp)), h_min(h_min_) {}
};

/// h = 1 + eps zeta - beta b, checked against ctx.h_min.
Field water_depth(const Field& zeta, const ModelContext& ctx);

/// Boussinesq-Coriolis system in the renormalized W = V_sharp / h form.
BoussinesqState boussinesq_rhs(const BoussinesqState& state, const ModelContext& ctx);

/// Boussinesq-Coriolis without the V_sharp equations and the V_sharp term.
LinearState weak_rotation_rhs(const LinearState& state, const ModelContext& ctx);

/// Rotation-transport flow dW/dt = -eps u W_x - (eps/Ro) W^perp with W^perp = (-W2, W1).
std::pair<Field, Field> rotation_transport_rhs(const Field& w1, const Field& w2, const Field& u,
                                               const ModelContext& ctx);

// ---------------------------------------------------------------------------
// Scalar long-wave equations in the slow variables (xi, tau).
// ---------------------------------------------------------------------------

/// -(3/2) k k_xi - (1/6) k_xixixi + (1/2) d_xi^{-1} k
Field ostrovsky_rhs(const ScalarWave& k, const SpectralPlan& plan);

/// -(3/2) k k_xi - (1/6) k_xixixi
Field kdv_rhs(const ScalarWave& k, const SpectralPlan& plan);

/// Quadratic part -(3/2) k k_xi, dealiased; shared by KdV and Ostrovsky.
Field long_wave_nonlinearity(const Field& k, const SpectralPlan& plan);

/// Per-mode multiplier of a linear constant-coefficient operator.
struct LinearSymbol {
  std::vector<std::complex<double>> multipliers;
  /// The operator includes d^{-1}: data must have zero mean.
  bool requires_zero_mean = false;
};

/// Fourier symbol of -(1/6) d^3: i xi^3 / 6.
LinearSymbol kdv_symbol(const SpectralPlan& plan);
/// Fourier symbol of -(1/6) d^3 + (1/2) d^{-1}: i xi^3 / 6 - i / (2 xi), zero at xi = 0.
LinearSymbol ostrovsky_symbol(const SpectralPlan& plan);

// ---------------------------------------------------------------------------
// Linear Poincare system
// ---------------------------------------------------------------------------

/// Exact solution operator S(t) of zeta_t + u_x = 0, u_t + zeta_x - v = 0, v_t + u = 0,
/// applied mode by mode. The Nyquist mode is projected out.
LinearState poincare_semigroup(const LinearState& state0, double t, const SpectralPlan& plan);

/// Generator matrix of the linear system at wavenumber xi (row-major 3x3).
std::array<std::complex<double>, 9> poincare_generator(double xi);
/// Propagator matrix S(t, xi) (row-major 3x3).
std::array<std::complex<double>, 9> poincare_propagator(double t, double xi);

struct GeostrophicResidual {
  Field residual;  ///< zeta - v_x
  double norm = 0.0;
};

/// Residual of the condition zeta = v_x under which a solution is a pure sum of
/// two Poincare waves.
GeostrophicResidual geostrophic_residual(const LinearState& state, const SpectralPlan& plan);

/// Same condition evaluated through the projection-matrix kernel in Fourier
/// space; returns the L2 norm of the projected data.
double geostrophic_residual_modal(const LinearState& state, const SpectralPlan& plan);

}  // namespace rsw
