#include "rsw/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rsw/error.hpp"

namespace rsw {

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Bouss: return "bouss";
    case RegimeTag::Poin: return "poin";
    case RegimeTag::Ost: return "ost";
    case RegimeTag::KdV: return "kdv";
    case RegimeTag::GN: return "gn";
    case RegimeTag::GNMedium: return "gn_medium";
  }
  return "unknown";
}

std::optional<RegimeTag> parse_regime_tag(std::string_view text) {
  for (auto tag : {RegimeTag::Bouss, RegimeTag::Poin, RegimeTag::Ost, RegimeTag::KdV, RegimeTag::GN,
                   RegimeTag::GNMedium}) {
    if (text == to_string(tag)) return tag;
  }
  return std::nullopt;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool nearly_equal(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace

RegimeCheck validate_regime(const DimensionlessParams& p, const Regime& regime) {
  RegimeCheck check;
  auto fail = [&check](std::string msg) {
    check.valid = false;
    check.violations.push_back(std::move(msg));
  };
  const double c = regime.order_constant;
  const double tol = regime.equality_tol;

  // Parameter constraints shared by every regime.
  if (!(p.mu > 0.0) || !(p.mu <= regime.mu0))
    fail("constraint 0 < mu <= mu_max violated (mu = " + fmt(p.mu) + ", mu_max = " + fmt(regime.mu0) + ")");
  if (!(p.eps > 0.0) || !(p.eps <= 1.0)) fail("constraint 0 < eps <= 1 violated (eps = " + fmt(p.eps) + ")");
  if (!(p.gamma >= 0.0) || !(p.gamma <= 1.0))
    fail("constraint 0 <= gamma <= 1 violated (gamma = " + fmt(p.gamma) + ")");
  if (!(p.beta >= 0.0) || !(p.beta <= 1.0)) fail("constraint 0 <= beta <= 1 violated (beta = " + fmt(p.beta) + ")");
  if (!(p.inv_ro >= 0.0) || !(p.inv_ro <= 1.0))
    fail("constraint 0 <= eps/Ro <= 1 violated (eps/Ro = " + fmt(p.inv_ro) + ")");

  const auto require_equal = [&](double value, double target, const char* what) {
    if (!nearly_equal(value, target, tol))
      fail(std::string("regime ") + std::string(to_string(regime.tag)) + " requires " + what + " (got " + fmt(value) +
           ", expected " + fmt(target) + ")");
  };
  const auto require_order = [&](double value, double scale, const char* what) {
    if (!(value <= c * scale))
      fail(std::string("regime ") + std::string(to_string(regime.tag)) + " requires " + what + " (got " + fmt(value) +
           ", bound " + fmt(c * scale) + " with c = " + fmt(c) + ")");
  };

  const double sqrt_mu = std::sqrt(std::max(p.mu, 0.0));
  switch (regime.tag) {
    case RegimeTag::Bouss:
      require_order(p.eps, p.mu, "eps = O(mu)");
      require_order(p.beta, p.mu, "beta = O(mu)");
      require_equal(p.gamma, 0.0, "gamma = 0");
      break;
    case RegimeTag::Poin:
      require_equal(p.eps, p.mu, "eps = mu");
      require_equal(p.beta, 0.0, "beta = 0");
      require_equal(p.gamma, 0.0, "gamma = 0");
      require_equal(p.inv_ro, 1.0, "eps/Ro = 1");
      break;
    case RegimeTag::Ost:
      require_equal(p.eps, p.mu, "eps = mu");
      require_equal(p.beta, 0.0, "beta = 0");
      require_equal(p.gamma, 0.0, "gamma = 0");
      require_equal(p.inv_ro, sqrt_mu, "eps/Ro = sqrt(mu)");
      break;
    case RegimeTag::KdV:
      require_equal(p.eps, p.mu, "eps = mu");
      require_equal(p.beta, 0.0, "beta = 0");
      require_equal(p.gamma, 0.0, "gamma = 0");
      require_equal(p.inv_ro, p.mu, "eps/Ro = mu");
      break;
    case RegimeTag::GN:
      require_order(p.beta, p.mu, "beta = O(mu)");
      require_equal(p.gamma, 0.0, "gamma = 0");
      break;
    case RegimeTag::GNMedium:
      require_order(p.eps, sqrt_mu, "eps = O(sqrt(mu))");
      require_order(p.inv_ro, sqrt_mu, "eps/Ro = O(sqrt(mu))");
      require_order(p.beta, p.mu, "beta = O(mu)");
      require_equal(p.gamma, 0.0, "gamma = 0");
      break;
  }
  return check;
}

DimensionlessParams regime_params(RegimeTag tag, double mu) {
  DimensionlessParams p;
  p.mu = mu;
  p.eps = mu;
  switch (tag) {
    case RegimeTag::Poin: p.inv_ro = 1.0; break;
    case RegimeTag::Ost: p.inv_ro = std::sqrt(mu); break;
    case RegimeTag::KdV: p.inv_ro = mu; break;
    case RegimeTag::GNMedium:
      p.eps = std::sqrt(mu);
      p.inv_ro = std::sqrt(mu);
      break;
    case RegimeTag::Bouss:
    case RegimeTag::GN:
      p.beta = mu;
      p.inv_ro = 1.0;
      break;
  }
  return p;
}

// ---------------------------------------------------------------------------

Grid1D::Grid1D(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 16 || (n & (n - 1)) != 0)
    throw ValidationError("grid size must be a power of two >= 16 (got " + std::to_string(n) + ")");
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("grid length must be positive");
}

std::vector<double> Grid1D::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

double Grid1D::wavenumber(std::size_t m) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

// ---------------------------------------------------------------------------

Field& Field::operator+=(const Field& other) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& v : values_) v *= a;
  return *this;
}

Field& Field::operator+=(double a) {
  for (auto& v : values_) v += a;
  return *this;
}

Field& Field::add_scaled(double a, const Field& x) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += a * x.values_[j];
  return *this;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const noexcept {
  if (values_.empty()) return 0.0;
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a) { return a *= -1.0; }
Field operator*(Field a, double s) { return a *= s; }
Field operator*(double s, Field a) { return a *= s; }

Field operator*(Field a, const Field& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] *= b[j];
  return a;
}

Field operator/(Field a, const Field& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] /= b[j];
  return a;
}

Field constant_field(std::size_t n, double value) { return Field(n, value); }

double integrate(const Field& f, const Grid1D& grid) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * grid.dx();
}

double l2_norm(const Field& f, const Grid1D& grid) {
  double s = 0.0;
  for (double v : f) s += v * v;
  return std::sqrt(s * grid.dx());
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

bool ScalarWave::antiderivative_defined(double rel_tol) const {
  return std::abs(k.mean()) <= rel_tol * std::max(k.max_abs(), 1e-300) || k.max_abs() == 0.0;
}

}  // namespace rsw
