#pragma once

#include <array>

#include "rsw/core.hpp"
#include "rsw/models.hpp"

namespace rsw {

// ---------------------------------------------------------------------------
// Pointwise tensor algebra. Index 1 is x, index 2 is y.
// ---------------------------------------------------------------------------

/// Symmetric 2-tensor (E_xx, E_xy, E_yy).
struct SymTensor2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  bool operator==(const SymTensor2&) const = default;
};

/// Fully symmetric 3-tensor stored as (F_111, F_112, F_122, F_222).
struct SymTensor3 {
  double f111 = 0.0, f112 = 0.0, f122 = 0.0, f222 = 0.0;
  bool operator==(const SymTensor3&) const = default;
};

/// Rotation part E^S = [[-2 E_xy, E_xx - E_yy], [E_xx - E_yy, 2 E_xy]].
SymTensor2 rotation_part(const SymTensor2& e);
/// Stretching term l(E, d_x V) for d_x V = (ux, vx).
SymTensor2 stretching(const SymTensor2& e, double ux, double vx);
/// D(V_sharp, u) = u_xx [[0, u_sharp], [u_sharp, 2 v_sharp]].
SymTensor2 vorticity_source(double u_sharp, double v_sharp, double uxx);

/// All eight components F_ijk, flat index 4 (i-1) + 2 (j-1) + (k-1).
std::array<double, 8> unfold(const SymTensor3& f);
/// Rotation part F^S_ijk = s(i) F_{f(i)jk} + s(j) F_{i f(j) k} + s(k) F_{ij f(k)},
/// s(1) = -1, f(1) = 2, s(2) = +1, f(2) = 1, on the unfolded tensor.
std::array<double, 8> rotation_part(const std::array<double, 8>& f);
/// Same, restricted to symmetric tensors.
SymTensor3 rotation_part(const SymTensor3& f);

// ---------------------------------------------------------------------------
// The (1 + mu T) operator, T = -1/(3h) d_x (h^3 d_x .)
// ---------------------------------------------------------------------------

struct EllipticSolveOptions {
  double rel_tol = 1e-12;
  int max_iter = 200;
};

/// (1 + mu T) a.
Field apply_one_plus_mu_t(const Field& a, const Field& h, double mu, const SpectralPlan& plan);

/// Solves (1 + mu T) a = r by conjugate gradients on the symmetric form
/// h a - mu/3 d_x(h^3 d_x a) = h r, preconditioned with the constant-depth
/// operator. Throws EllipticSolveFailure when the tolerance is not reached.
Field solve_one_plus_mu_t(const Field& r, const Field& h, double mu, const SpectralPlan& plan,
                          const EllipticSolveOptions& options = {}, int* iterations = nullptr);

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

/// Green-Naghdi-Coriolis system with small bathymetry.
GNState gn_rhs(const GNState& state, const ModelContext& ctx, const EllipticSolveOptions& options = {});

/// Medium-amplitude, weak-rotation reduction: (zeta, u, v, E) only.
GNMediumState gn_medium_rhs(const GNMediumState& state, const ModelContext& ctx,
                            const EllipticSolveOptions& options = {});

/// Time derivative of (F_111, F_112, F_122, F_222).
std::array<Field, 4> f_equation_rhs(const GNState& state, const ModelContext& ctx);

/// Time derivative of all eight F_ijk from the index formula, with F unfolded
/// from the symmetric state. Used to check the symmetric reduction.
std::array<Field, 8> f_equation_rhs_unfolded(const GNState& state, const ModelContext& ctx);

}  // namespace rsw
