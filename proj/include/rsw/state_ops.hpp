#pragma once

#include <cstddef>
#include <tuple>
#include <utility>

#include "rsw/core.hpp"

namespace rsw {

/// Applies fn(a_i, b_i) to corresponding fields of two states.
template <class S, class T, class Fn>
void for_each_field_pair(S& a, T& b, Fn&& fn) {
  auto fa = a.fields();
  auto fb = b.fields();
  [&]<std::size_t... I>(std::index_sequence<I...>) {
    (fn(std::get<I>(fa), std::get<I>(fb)), ...);
  }(std::make_index_sequence<std::tuple_size_v<decltype(fa)>>{});
}

template <class S, class Fn>
void for_each_field(S& s, Fn&& fn) {
  std::apply([&](auto&... f) { (fn(f), ...); }, s.fields());
}

/// y += a * x, field by field.
template <class S>
void add_scaled(S& y, double a, const S& x) {
  for_each_field_pair(y, x, [a](Field& fy, const Field& fx) { fy.add_scaled(a, fx); });
}

template <class S>
S scaled(S x, double a) {
  for_each_field(x, [a](Field& f) { f *= a; });
  return x;
}

template <class S>
bool all_finite(const S& s) {
  bool ok = true;
  for_each_field(s, [&](const Field& f) { ok = ok && f.all_finite(); });
  return ok;
}

/// Largest pointwise difference over all fields.
template <class S>
double max_state_diff(const S& a, const S& b) {
  double m = 0.0;
  for_each_field_pair(a, b, [&](const Field& fa, const Field& fb) {
    const double d = max_abs_diff(fa, fb);
    if (d > m) m = d;
  });
  return m;
}

}  // namespace rsw
