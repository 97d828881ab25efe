#include "rsw/norms.hpp"

#include <cmath>
#include <string>

#include "rsw/error.hpp"

namespace rsw {

double xsmu_norm(const BoussinesqState& st, int s, double mu, const SpectralPlan& plan) {
  auto sq = [&](const Field& f) {
    const double v = plan.sobolev_norm(f, s);
    return v * v;
  };
  const double total = sq(st.zeta) + sq(st.u) + mu * sq(plan.deriv(st.u)) + sq(st.v) + sq(st.w1) + sq(st.w2) +
                       mu * (sq(plan.deriv(st.w1)) + sq(plan.deriv(st.w2)));
  return std::sqrt(total);
}

double symmetrizer_energy(const Field& zeta, const Field& u, const Field& v, int s, const DimensionlessParams& p,
                          const Field& b, const SpectralPlan& plan, double h_min) {
  const Grid1D& grid = plan.grid();
  Field h = Field(grid.n(), 1.0).add_scaled(p.eps, zeta).add_scaled(-p.beta, b);
  for (std::size_t j = 0; j < h.size(); ++j)
    if (h[j] < h_min)
      throw NonPositiveDepth("depth " + std::to_string(h[j]) + " below h_min at x=" + std::to_string(grid.x(j)));

  const Field lz = plan.bessel_potential(zeta, s);
  const Field lu = plan.bessel_potential(u, s);
  const Field lv = plan.bessel_potential(v, s);
  const Field dlu = plan.deriv(lu);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.n(); ++j) {
    sum += lz[j] * lz[j] + h[j] * lu[j] * lu[j] + p.mu / 3.0 * h[j] * dlu[j] * dlu[j] + h[j] * lv[j] * lv[j];
  }
  return sum * grid.dx();
}

double symmetrizer_energy(const BoussinesqState& st, int s, const DimensionlessParams& p, const Field& b,
                          const SpectralPlan& plan, double h_min) {
  return symmetrizer_energy(st.zeta, st.u, st.v, s, p, b, plan, h_min);
}

}  // namespace rsw
