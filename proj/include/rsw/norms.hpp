#pragma once

#include "rsw/core.hpp"
#include "rsw/spectral.hpp"

namespace rsw {

/// Energy norm of the Boussinesq-Coriolis state space:
/// sqrt(|zeta|_s^2 + |u|_s^2 + mu |u_x|_s^2 + |v|_s^2 + |W|_s^2 + mu |W_x|_s^2),
/// with |.|_s the Sobolev norm of weight (1 + xi^2)^s.
double xsmu_norm(const BoussinesqState& state, int s, double mu, const SpectralPlan& plan);

/// Symmetrizer energy (S(U) L^s U, L^s U) with L = (1 - d_x^2)^{1/2}:
///   (L^s zeta, L^s zeta) + (h L^s u, L^s u) + mu/3 (h d_x L^s u, d_x L^s u) + (h L^s v, L^s v),
/// h = 1 + eps zeta - beta b. Throws NonPositiveDepth if h < h_min somewhere.
double symmetrizer_energy(const BoussinesqState& state, int s, const DimensionlessParams& params,
                          const Field& bathymetry, const SpectralPlan& plan, double h_min = 1e-3);

/// Same energy for any state carrying (zeta, u, v).
double symmetrizer_energy(const Field& zeta, const Field& u, const Field& v, int s,
                          const DimensionlessParams& params, const Field& bathymetry, const SpectralPlan& plan,
                          double h_min = 1e-3);

}  // namespace rsw
