#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace rsw {

// ---------------------------------------------------------------------------
// Dimensionless parameters and asymptotic regimes
// ---------------------------------------------------------------------------

/// The quintuple (eps, beta, gamma, mu, eps/Ro). Only the ratio eps/Ro enters
/// the model equations, so it is stored instead of the Rossby number.
struct DimensionlessParams {
  double eps = 0.0;     ///< nonlinearity
  double beta = 0.0;    ///< bathymetry amplitude
  double gamma = 0.0;   ///< transversality
  double mu = 0.0;      ///< shallowness
  double inv_ro = 0.0;  ///< eps / Ro
};

enum class RegimeTag { Bouss, Poin, Ost, KdV, GN, GNMedium };

std::string_view to_string(RegimeTag tag);
std::optional<RegimeTag> parse_regime_tag(std::string_view text);

/// An asymptotic regime. Order relations "a = O(mu)" are checked as
/// a <= order_constant * mu; equalities are checked to relative `equality_tol`.
struct Regime {
  RegimeTag tag = RegimeTag::Bouss;
  double mu0 = 1.0;  ///< regime ceiling for mu (also used as mu_max)
  double order_constant = 1.0;
  double equality_tol = 1e-12;
};

struct RegimeCheck {
  bool valid = true;
  std::vector<std::string> violations;

  explicit operator bool() const noexcept { return valid; }
};

RegimeCheck validate_regime(const DimensionlessParams& params, const Regime& regime);

/// Canonical parameters of a regime at shallowness mu: eps = mu with
/// eps/Ro = 1 (Poin), sqrt(mu) (Ost) or mu (KdV); eps = eps/Ro = sqrt(mu) for
/// GNMedium; eps = beta = mu and eps/Ro = 1 for Bouss and GN.
DimensionlessParams regime_params(RegimeTag tag, double mu);

// ---------------------------------------------------------------------------
// Grid and fields
// ---------------------------------------------------------------------------

/// Uniform periodic grid x_j = -L/2 + j*dx, j = 0..n-1.
class Grid1D {
 public:
  Grid1D(std::size_t n, double length);

  std::size_t n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept { return -0.5 * length_ + static_cast<double>(j) * dx(); }
  std::vector<double> points() const;

  /// Wavenumber 2*pi*m/L of the m-th non-negative mode, m = 0..n/2.
  double wavenumber(std::size_t m) const noexcept;
  double nyquist() const noexcept { return wavenumber(n_ / 2); }

  bool operator==(const Grid1D&) const = default;

 private:
  std::size_t n_;
  double length_;
};

/// Real scalar field sampled on a Grid1D.
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t j) noexcept { return values_[j]; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);
  Field& operator+=(double a);
  /// this += a * x
  Field& add_scaled(double a, const Field& x);

  bool all_finite() const noexcept;
  double max_abs() const noexcept;
  double mean() const noexcept;

  bool operator==(const Field&) const = default;

 private:
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a);
Field operator*(Field a, double s);
Field operator*(double s, Field a);
/// Pointwise product.
Field operator*(Field a, const Field& b);
/// Pointwise quotient.
Field operator/(Field a, const Field& b);

Field constant_field(std::size_t n, double value);
template <class F>
Field sample(const Grid1D& grid, F&& f) {
  Field out(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) out[j] = f(grid.x(j));
  return out;
}

/// Periodic trapezoid quadrature (spectrally exact for band-limited data).
double integrate(const Field& f, const Grid1D& grid);
double l2_norm(const Field& f, const Grid1D& grid);
double max_abs_diff(const Field& a, const Field& b);

// ---------------------------------------------------------------------------
// Model states. Each exposes fields() so that the time integrators can treat
// it as a vector of Fields.
// ---------------------------------------------------------------------------

/// (zeta, u, v) of the linear Poincare system and of the weak-rotation models.
struct LinearState {
  Field zeta, u, v;

  auto fields() { return std::tie(zeta, u, v); }
  auto fields() const { return std::tie(zeta, u, v); }
};

/// Boussinesq-Coriolis state; (w1, w2) = V_sharp / h.
struct BoussinesqState {
  Field zeta, u, v, w1, w2;

  auto fields() { return std::tie(zeta, u, v, w1, w2); }
  auto fields() const { return std::tie(zeta, u, v, w1, w2); }
};

/// Green-Naghdi-Coriolis state with symmetric E (3 components) and fully
/// symmetric F (4 components). Index 1 is x, index 2 is y.
struct GNState {
  Field zeta, u, v;
  Field vs1, vs2;
  Field e_xx, e_xy, e_yy;
  Field f_111, f_112, f_122, f_222;

  auto fields() { return std::tie(zeta, u, v, vs1, vs2, e_xx, e_xy, e_yy, f_111, f_112, f_122, f_222); }
  auto fields() const {
    return std::tie(zeta, u, v, vs1, vs2, e_xx, e_xy, e_yy, f_111, f_112, f_122, f_222);
  }
};

/// State of the reduced medium-amplitude system: no V_sharp, no F.
struct GNMediumState {
  Field zeta, u, v;
  Field e_xx, e_xy, e_yy;

  auto fields() { return std::tie(zeta, u, v, e_xx, e_xy, e_yy); }
  auto fields() const { return std::tie(zeta, u, v, e_xx, e_xy, e_yy); }
};

/// Scalar wave k(xi, tau) of the KdV and Ostrovsky equations.
struct ScalarWave {
  Field k;

  /// True when k has zero mean, i.e. lies in the range of the derivative.
  bool antiderivative_defined(double rel_tol = 1e-10) const;

  auto fields() { return std::tie(k); }
  auto fields() const { return std::tie(k); }
};

template <class S>
S zero_state(std::size_t n) {
  S s;
  std::apply([n](auto&... f) { ((f = Field(n)), ...); }, s.fields());
  return s;
}

}  // namespace rsw
