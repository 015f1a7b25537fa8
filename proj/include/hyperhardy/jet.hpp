#pragma once

#include <cmath>

namespace hyperhardy {

/// Truncated Taylor jet (f, f', f'') along one direction; forward mode.
struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
  constexpr Jet(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
};

constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d, -a.dd}; }
constexpr Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}

// Composition with a scalar function g given g(x), g'(x), g''(x).
constexpr Jet chain(const Jet& a, double g0, double g1, double g2) {
  return {g0, g1 * a.d, g2 * a.d * a.d + g1 * a.dd};
}

inline Jet operator/(const Jet& a, const Jet& b) {
  const double inv = 1.0 / b.v;
  return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet sinh(const Jet& a) { return chain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
inline Jet cosh(const Jet& a) { return chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet pow(const Jet& a, double p) {
  return chain(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0), p * (p - 1.0) * std::pow(a.v, p - 2.0));
}

}  // namespace hyperhardy
