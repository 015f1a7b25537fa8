#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/forms.hpp"
#include "hyperhardy/hardy.hpp"
#include "hyperhardy/jet.hpp"
#include "hyperhardy/manifold.hpp"
#include "hyperhardy/radial_function.hpp"

namespace hyperhardy {

/// Area of the unit sphere S^k.
inline double sphere_area(int k) {
  if (k < 0) throw DomainError("sphere_area: k must be >= 0");
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// Side-by-side values of an exact identity lhs == rhs.
struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  /// |lhs - rhs| / |lhs|, or 0 when both sides vanish.
  double discrepancy = 0.0;
};

namespace detail {

inline IdentityCheck make_identity(double lhs, double rhs) {
  IdentityCheck c{lhs, rhs, 0.0};
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale > 0.0) c.discrepancy = std::abs(lhs - rhs) / scale;
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ball model

/// Geodesic radius of the Euclidean point |x| = t in the ball model.
inline double ball_geodesic_radius(double t) {
  if (!(t >= 0.0) || !(t < 1.0)) throw DomainError("ball_geodesic_radius: need 0 <= t < 1");
  return 2.0 * std::atanh(t);
}

/// v(t) = (2/(1-t^2))^((N-2)/2) u(2 atanh t) for radial u on hyperbolic space.
inline RadialFunction ball_transform(const RadialFunction& u, int N) {
  if (N < 3) throw DomainError("ball_transform: N must be >= 3");
  if (!u.has_d1() || !u.has_d2()) throw CapabilityError("ball_transform needs u' and u''");
  const Support s = u.support();
  if (!std::isfinite(s.hi)) throw SupportError("'" + u.id() + "' has unbounded support");
  const double k = 0.5 * (N - 2);
  auto jet = [u, k](double t) {
    const double W = 2.0 / (1.0 - t * t);
    const double W1 = t * W * W;
    const Jet w(W, W1, W * W + 2.0 * t * W * W1);
    const Jet r(2.0 * std::atanh(t), W, W1);
    const Jet ur = chain(r, u.value(r.v), u.d1(r.v), u.d2(r.v));
    const Jet v = pow(w, k) * ur;
    return Jet2{v.v, v.d, v.dd};
  };
  return from_jet(jet, {std::tanh(0.5 * s.lo), std::tanh(0.5 * s.hi)}, "ball(" + u.id() + ")");
}

enum class BallIdentity { gradient, mass, hardy_weight };

inline std::string to_string(BallIdentity w) {
  switch (w) {
    case BallIdentity::gradient: return "gradient";
    case BallIdentity::mass: return "mass";
    case BallIdentity::hardy_weight: return "hardy_weight";
  }
  return "unknown";
}

/// Hyperbolic radial integral (in r) against its ball-model counterpart (in t):
///   gradient:     int |grad u|^2    = int |v'|^2 + (N(N-2)/4) int W^2 v^2
///   mass:         int u^2           = int W^2 v^2
///   hardy_weight: int u^2/r^2       = int W^2 v^2 / log((1+t)/(1-t))^2
/// with W = 2/(1-t^2). Surface factors are dropped on both sides.
inline IdentityCheck ball_identity_check(const RadialFunction& u, int N, BallIdentity which,
                                         std::size_t panels = 32) {
  const auto H = ModelManifold::hyperbolic(N);
  const Support s = u.support();
  if (!std::isfinite(s.hi)) throw SupportError("'" + u.id() + "' has unbounded support");
  const RadialFunction v = ball_transform(u, N);
  const QuadratureRule r_rule = support_rule(u, panels);
  const QuadratureRule t_rule =
      gauss_rule({std::tanh(0.5 * s.lo), std::tanh(0.25 * (s.lo + s.hi)), std::tanh(0.5 * s.hi)}, panels);
  auto ball = [&](auto&& f) {
    return integrate_checked(t_rule, [&](double t) { return f(t) * std::pow(t, N - 1); });
  };
  auto W2 = [](double t) {
    const double W = 2.0 / (1.0 - t * t);
    return W * W;
  };
  double lhs = 0.0, rhs = 0.0;
  switch (which) {
    case BallIdentity::gradient:
      lhs = dirichlet_form(u, H, r_rule);
      rhs = ball([&](double t) { return v.d1(t) * v.d1(t); }) +
            0.25 * N * (N - 2) * ball([&](double t) { return W2(t) * v.value(t) * v.value(t); });
      break;
    case BallIdentity::mass:
      lhs = weighted_l2(u, detail::one, H, r_rule);
      rhs = ball([&](double t) { return W2(t) * v.value(t) * v.value(t); });
      break;
    case BallIdentity::hardy_weight:
      lhs = weighted_l2(u, detail::inv_r2, H, r_rule);
      rhs = ball([&](double t) {
        const double L = 2.0 * std::atanh(t);
        return W2(t) * v.value(t) * v.value(t) / (L * L);
      });
      break;
  }
  return detail::make_identity(lhs, rhs);
}

/// Hardy inequality in the unit ball with the hyperbolic boundary weight:
///   int |v'|^2 - (1/4) int W^2 v^2 >= (1/4) int W^2 v^2 / log((1+t)/(1-t))^2
/// against t^(N-1) dt, W = 2/(1-t^2).
inline HardyReport check_corollary22(const RadialFunction& v, int N) {
  if (N < 3) throw DomainError("check_corollary22: N must be >= 3");
  if (!v.has_d1()) throw CapabilityError("check_corollary22 needs v'");
  const Support s = v.support();
  if (!(s.hi < 1.0)) throw SupportError("'" + v.id() + "' support reaches the unit sphere");
  if (s.lo > 0.0) {
    require_compact_support(v, 0.0, 1.0);
  } else if (v.value(s.hi) != 0.0) {
    throw SupportError("'" + v.id() + "' does not vanish at the end of its support");
  }
  auto eval = [&](const QuadratureRule& rule) {
    double grad = 0.0, mass = 0.0, hardy = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double t = rule.nodes[i];
      const double m = rule.weights[i] * std::pow(t, N - 1);
      const double W = 2.0 / (1.0 - t * t);
      const double L = 2.0 * std::atanh(t);
      const double f = v.value(t), f1 = v.d1(t);
      grad += m * f1 * f1;
      mass += m * W * W * f * f;
      hardy += m * W * W * f * f / (L * L);
    }
    if (!std::isfinite(grad + mass + hardy)) throw EvaluationError("non-finite ball integrand", s.lo);
    return detail::Sides{grad - 0.25 * mass, 0.25 * hardy};
  };
  const detail::Sides fine = eval(support_rule(v, 32));
  const detail::Sides coarse = eval(support_rule(v, 16));
  HardyReport rep;
  rep.N = N;
  rep.family = "ball";
  rep.test_id = v.id();
  rep.lhs = fine.lhs;
  rep.rhs = fine.rhs;
  rep.margin = fine.lhs - fine.rhs;
  rep.quad_error = std::abs(rep.margin - (coarse.lhs - coarse.rhs));
  return rep;
}

struct WeightComparison {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs; }
};

/// log((1+t)/(1-t))^2 against (1 - log((1-t)/2))^2.
inline WeightComparison ball_weight_comparison(double t) {
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("ball_weight_comparison: need 0 < t < 1");
  const double L = 2.0 * std::atanh(t);
  const double R = 1.0 - std::log1p(-t) + std::numbers::ln2;
  return {t, L * L, R * R};
}

// ---------------------------------------------------------------------------
// Upper half-space model

struct HalfSpacePoint {
  std::vector<double> x;
  double y = 1.0;
};

/// Hyperbolic distance from (x, y) to (0, 1), given |x|.
inline double geodesic_distance_halfspace(double x_norm, double y) {
  if (!(y > 0.0)) throw DomainError("geodesic_distance_halfspace: need y > 0");
  const double z = ((y - 1.0) * (y - 1.0) + x_norm * x_norm) / (2.0 * y);
  return std::log1p(z + std::sqrt(z * (z + 2.0)));
}

inline double geodesic_distance_halfspace(const HalfSpacePoint& p) {
  double n2 = 0.0;
  for (double xi : p.x) n2 += xi * xi;
  return geodesic_distance_halfspace(std::sqrt(n2), p.y);
}

/// Value, gradient and Hessian diagonal in D variables; closed under
/// arithmetic and smooth scalar maps, which is all a Laplacian needs.
template <std::size_t D>
struct LapJet {
  double v = 0.0;
  std::array<double, D> g{};
  std::array<double, D> h{};

  LapJet() = default;
  LapJet(double c) : v(c) {}  // NOLINT: constants promote implicitly

  static LapJet variable(double x, std::size_t i) {
    LapJet j(x);
    j.g[i] = 1.0;
    return j;
  }

  friend LapJet operator+(const LapJet& a, const LapJet& b) {
    LapJet r(a.v + b.v);
    for (std::size_t i = 0; i < D; ++i) {
      r.g[i] = a.g[i] + b.g[i];
      r.h[i] = a.h[i] + b.h[i];
    }
    return r;
  }
  friend LapJet operator-(const LapJet& a) {
    LapJet r(-a.v);
    for (std::size_t i = 0; i < D; ++i) {
      r.g[i] = -a.g[i];
      r.h[i] = -a.h[i];
    }
    return r;
  }
  friend LapJet operator-(const LapJet& a, const LapJet& b) { return a + (-b); }
  friend LapJet operator*(const LapJet& a, const LapJet& b) {
    LapJet r(a.v * b.v);
    for (std::size_t i = 0; i < D; ++i) {
      r.g[i] = a.g[i] * b.v + a.v * b.g[i];
      r.h[i] = a.h[i] * b.v + 2.0 * a.g[i] * b.g[i] + a.v * b.h[i];
    }
    return r;
  }
  friend LapJet operator/(const LapJet& a, const LapJet& b) {
    const double inv = 1.0 / b.v;
    return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  /// Composition with a scalar map given its value and first two derivatives.
  friend LapJet chain(const LapJet& a, double f0, double f1, double f2) {
    LapJet r(f0);
    for (std::size_t i = 0; i < D; ++i) {
      r.g[i] = f1 * a.g[i];
      r.h[i] = f2 * a.g[i] * a.g[i] + f1 * a.h[i];
    }
    return r;
  }
  friend LapJet exp(const LapJet& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
  }
  friend LapJet log(const LapJet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
  friend LapJet sqrt(const LapJet& a) {
    const double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
  }
  friend LapJet pow(const LapJet& a, double p) {
    return chain(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0), p * (p - 1.0) * std::pow(a.v, p - 2.0));
  }

  double laplacian() const {
    double s = 0.0;
    for (double x : h) s += x;
    return s;
  }
};

/// Jets in (x_1, x_2, y) evaluated at x = (rho, 0, ..., 0); x_2 stands for
/// each of the N-2 directions transverse to x.
using HalfJet = LapJet<3>;

struct HalfSpaceSample {
  double v = 0.0;
  double dy = 0.0;
  double grad_sq = 0.0;
  double laplacian = 0.0;
};

/// Function on the half-space that depends on (|x|^2, y) only, with a
/// bounding box [0, rho_max] x [y_lo, y_hi] for its support.
class HalfSpaceFunction {
 public:
  using Profile = std::function<HalfJet(const HalfJet& rho2, const HalfJet& y)>;

  HalfSpaceFunction(Profile profile, double rho_max, double y_lo, double y_hi, std::string id)
      : profile_(std::move(profile)), rho_max_(rho_max), y_lo_(y_lo), y_hi_(y_hi), id_(std::move(id)) {
    if (!profile_) throw ArgumentError("HalfSpaceFunction: profile required");
    if (!(y_lo > 0.0)) throw SupportError("'" + id_ + "' support touches y = 0");
    if (!(rho_max > 0.0) || !(y_hi > y_lo) || !std::isfinite(y_hi) || !std::isfinite(rho_max))
      throw ArgumentError("HalfSpaceFunction: bad bounding box");
  }

  HalfSpaceSample at(double rho, double y, int N) const {
    HalfJet r2(rho * rho);
    r2.g = {2.0 * rho, 0.0, 0.0};
    r2.h = {2.0, 2.0, 0.0};
    const HalfJet j = profile_(r2, HalfJet::variable(y, 2));
    const double m = N - 2;
    return {j.v, j.g[2], j.g[0] * j.g[0] + m * j.g[1] * j.g[1] + j.g[2] * j.g[2], j.h[0] + m * j.h[1] + j.h[2]};
  }

  double rho_max() const noexcept { return rho_max_; }
  double y_lo() const noexcept { return y_lo_; }
  double y_hi() const noexcept { return y_hi_; }
  const std::string& id() const noexcept { return id_; }

 private:
  Profile profile_;
  double rho_max_;
  double y_lo_;
  double y_hi_;
  std::string id_;
};

/// exp(1 - 1/(1 - rho^2/R^2)) * B(y) * (1 + c_y (y - y_lo)/(y_hi - y_lo) + c_rho rho^2/R^2),
/// B the C-infinity bump on [y_lo, y_hi].
inline HalfSpaceFunction tensor_bump(double rho_max, double y_lo, double y_hi, double c_y = 0.0,
                                     double c_rho = 0.0) {
  if (!(y_lo > 0.0)) throw SupportError("tensor_bump: support touches y = 0");
  if (!(rho_max > 0.0) || !(y_hi > y_lo)) throw ArgumentError("tensor_bump: bad box");
  const double R2 = rho_max * rho_max;
  auto profile = [=](const HalfJet& rho2, const HalfJet& y) -> HalfJet {
    const double s = rho2.v / R2;
    if (s >= 1.0 || y.v <= y_lo || y.v >= y_hi) return HalfJet(0.0);
    const double q = 1.0 / (1.0 - s);
    const double F = std::exp(1.0 - q);
    const HalfJet Fs = chain(rho2, F, -F * q * q / R2, F * (q * q * q * q - 2.0 * q * q * q) / (R2 * R2));
    const Jet2 b = smooth_bump_jet(y_lo, y_hi, y.v);
    const HalfJet By = chain(y, b.f, b.d1, b.d2);
    const HalfJet mod = 1.0 + c_y * (y - y_lo) / (y_hi - y_lo) + c_rho * rho2 / R2;
    return Fs * By * mod;
  };
  return {profile, rho_max, y_lo, y_hi,
          "tbump[" + std::to_string(rho_max) + ";" + std::to_string(y_lo) + "," + std::to_string(y_hi) + "]"};
}

/// v(x, y) = y^(-alpha) U(d((x, y), (0, 1))) for a radial U on hyperbolic space.
inline HalfSpaceFunction halfspace_from_radial(const RadialFunction& U, double alpha) {
  if (!U.has_d1() || !U.has_d2()) throw CapabilityError("halfspace_from_radial needs U' and U''");
  const Support s = U.support();
  if (!(s.lo > 0.0) || !std::isfinite(s.hi))
    throw SupportError("'" + U.id() + "' must be supported in a compact annulus around (0, 1)");
  auto profile = [U, s, alpha](const HalfJet& rho2, const HalfJet& y) -> HalfJet {
    const HalfJet z = ((y - 1.0) * (y - 1.0) + rho2) / (2.0 * y);
    const double q = z.v * (z.v + 2.0);
    const double d0 = std::log1p(z.v + std::sqrt(q));
    if (d0 <= s.lo || d0 >= s.hi) return HalfJet(0.0);
    const double sq = std::sqrt(q);
    const HalfJet d = chain(z, d0, 1.0 / sq, -(z.v + 1.0) / (q * sq));
    return pow(y, -alpha) * chain(d, U.value(d0), U.d1(d0), U.d2(d0));
  };
  return {profile, std::sinh(s.hi), std::exp(-s.hi), std::exp(s.hi), "halfspace(" + U.id() + ")"};
}

/// Seeded tensor bumps inside [0, rho_hi] x [y_min, y_max].
struct HalfSpaceBumpSampler {
  double rho_hi = 2.0;
  double y_min = 0.1;
  double y_max = 6.0;

  HalfSpaceFunction operator()(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double R = rho_hi * (0.15 + 0.85 * U(rng));
    const double span = std::log(y_max / y_min);
    const double a = U(rng), b = U(rng);
    double lo = std::min(a, b), hi = std::max(a, b);
    if (hi - lo < 0.1) {
      const double mid = std::clamp(0.5 * (lo + hi), 0.05, 0.95);
      lo = mid - 0.05;
      hi = mid + 0.05;
    }
    return tensor_bump(R, y_min * std::exp(span * lo), y_min * std::exp(span * hi), U(rng) - 0.5, U(rng) - 0.5);
  }
};

namespace detail {

// Breakpoints on [lo, hi] with a geometric cluster toward `focus` when it
// lies in [lo, hi].
inline std::vector<double> focused_breaks(double lo, double hi, double focus, std::size_t panels, bool geometric,
                                          std::size_t levels = 24) {
  std::vector<double> b;
  for (std::size_t p = 0; p <= panels; ++p) {
    const double f = static_cast<double>(p) / static_cast<double>(panels);
    b.push_back(geometric ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  b.back() = hi;
  if (focus >= lo && focus <= hi) {
    if (focus > lo && focus < hi) b.push_back(focus);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    const auto it = std::find(b.begin(), b.end(), focus);
    const double left = it == b.begin() ? 0.0 : focus - *(it - 1);
    const double right = it + 1 == b.end() ? 0.0 : *(it + 1) - focus;
    for (std::size_t j = 1; j <= levels; ++j) {
      const double f = std::ldexp(1.0, -static_cast<int>(j));
      if (left > 0.0) b.push_back(focus - left * f);
      if (right > 0.0) b.push_back(focus + right * f);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace detail

/// Integrals over the half-space (with the S^(N-2) area folded into |x|)
/// that enter the half-space inequalities.
struct HalfSpaceIntegrals {
  double v2_y2 = 0.0;     // v^2/y^2
  double v2_y4 = 0.0;     // v^2/y^4
  double v2_y2d2 = 0.0;   // v^2/(y^2 d^2)
  double v2_y2d4 = 0.0;   // v^2/(y^2 d^4)
  double v2_y4d2 = 0.0;   // v^2/(y^4 d^2)
  double v2_y4d4 = 0.0;   // v^2/(y^4 d^4)
  double grad = 0.0;      // |grad v|^2
  double grad_y2 = 0.0;   // |grad v|^2/y^2
  double lap = 0.0;       // (Delta v)^2
  double lap_y2 = 0.0;    // y^2 (Delta v)^2
};

/// Tensor Gauss quadrature on the bounding box, graded toward |x| = 0 and
/// toward y = 1, where d vanishes.
inline HalfSpaceIntegrals halfspace_integrals(const HalfSpaceFunction& v, int N, std::size_t panels = 24) {
  if (N < 3) throw DomainError("halfspace_integrals: N must be >= 3");
  if (panels < 1) throw ArgumentError("halfspace_integrals: need at least one panel");
  const bool geo = v.y_hi() / v.y_lo() > 4.0;
  const double nowhere = -1.0;
  const bool pole = v.y_lo() < 1.0 && v.y_hi() > 1.0;
  const QuadratureRule rr =
      gauss_rule(detail::focused_breaks(0.0, v.rho_max(), pole ? 0.0 : nowhere, panels, false), 1);
  const QuadratureRule yr =
      gauss_rule(detail::focused_breaks(v.y_lo(), v.y_hi(), pole ? 1.0 : nowhere, panels, geo), 1);
  const double omega = sphere_area(N - 2);
  HalfSpaceIntegrals I;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double rho = rr.nodes[i];
    const double wr = omega * rr.weights[i] * std::pow(rho, N - 2);
    for (std::size_t j = 0; j < yr.size(); ++j) {
      const double y = yr.nodes[j];
      const HalfSpaceSample s = v.at(rho, y, N);
      if (s.v == 0.0 && s.grad_sq == 0.0 && s.laplacian == 0.0) continue;
      const double w = wr * yr.weights[j];
      const double y2 = 1.0 / (y * y);
      I.grad += w * s.grad_sq;
      I.grad_y2 += w * s.grad_sq * y2;
      I.lap += w * s.laplacian * s.laplacian;
      I.lap_y2 += w * s.laplacian * s.laplacian * y * y;
      if (s.v == 0.0) continue;
      const double id2 = 1.0 / std::pow(geodesic_distance_halfspace(rho, y), 2);
      const double a = w * s.v * s.v * y2;
      I.v2_y2 += a;
      I.v2_y4 += a * y2;
      I.v2_y2d2 += a * id2;
      I.v2_y2d4 += a * id2 * id2;
      I.v2_y4d2 += a * y2 * id2;
      I.v2_y4d4 += a * y2 * id2 * id2;
    }
  }
  for (double x : {I.v2_y2, I.v2_y2d2, I.v2_y2d4, I.grad, I.lap})
    if (!std::isfinite(x)) throw EvaluationError("non-finite half-space integrand in '" + v.id() + "'", v.y_lo());
  return I;
}

namespace detail {

template <class Eval>
HardyReport halfspace_report(const HalfSpaceFunction& v, int N, std::size_t panels, Eval&& eval) {
  const Sides fine = eval(halfspace_integrals(v, N, panels));
  const Sides coarse = eval(halfspace_integrals(v, N, std::max<std::size_t>(1, panels / 2)));
  HardyReport rep;
  rep.N = N;
  rep.family = "halfspace";
  rep.test_id = v.id();
  rep.lhs = fine.lhs;
  rep.rhs = fine.rhs;
  rep.margin = fine.lhs - fine.rhs;
  rep.quad_error = std::abs(rep.margin - (coarse.lhs - coarse.rhs));
  return rep;
}

}  // namespace detail

/// Improved Hardy-Maz'ya inequality:
///   int |grad v|^2 - (1/4) int v^2/y^2 >= (1/4) int v^2/(y^2 d^2)
inline HardyReport check_corollary23(const HalfSpaceFunction& v, int N, std::size_t panels = 24) {
  return detail::halfspace_report(v, N, panels, [](const HalfSpaceIntegrals& I) {
    return detail::Sides{I.grad - 0.25 * I.v2_y2, 0.25 * I.v2_y2d2};
  });
}

enum class HalfSpaceRellich { y2_weight, y4_weight };

inline std::string to_string(HalfSpaceRellich w) { return w == HalfSpaceRellich::y2_weight ? "y2" : "y4"; }

inline HalfSpaceRellich halfspace_rellich_from_string(const std::string& s) {
  if (s == "y2") return HalfSpaceRellich::y2_weight;
  if (s == "y4") return HalfSpaceRellich::y4_weight;
  throw ArgumentError("unknown half-space Rellich variant '" + s + "' (expected y2 or y4)");
}

/// Exponent alpha in v = y^(-alpha) u that carries the hyperbolic
/// bilaplacian onto the given half-space form.
inline double halfspace_rellich_alpha(int N, HalfSpaceRellich which) {
  return which == HalfSpaceRellich::y2_weight ? 0.5 * (N - 2) : 0.5 * (N - 4);
}

/// y2_weight:
///   int y^2 (Delta v)^2 + (N(N-2)/2) |grad v|^2
///     >= ((2N^2-4N+1)/16) int v^2/y^2 + ((N-1)^2/8) int v^2/(y^2 d^2) + (9/16) int v^2/(y^2 d^4)
/// y4_weight:
///   int (Delta v)^2 + ((N^2-2N-4)/2) |grad v|^2/y^2
///     >= (9(2N^2-4N-7)/16) int v^2/y^4 + ((N-1)^2/8) int v^2/(y^4 d^2) + (9/16) int v^2/(y^4 d^4)
inline HardyReport check_corollary32(const HalfSpaceFunction& v, int N, HalfSpaceRellich which,
                                     std::size_t panels = 24) {
  if (N < 5) throw DomainError("check_corollary32: N must be >= 5");
  const double n = N;
  const double q = (n - 1) * (n - 1) / 8.0;
  if (which == HalfSpaceRellich::y2_weight) {
    return detail::halfspace_report(v, N, panels, [&](const HalfSpaceIntegrals& I) {
      return detail::Sides{I.lap_y2 + 0.5 * n * (n - 2) * I.grad,
                           (2 * n * n - 4 * n + 1) / 16.0 * I.v2_y2 + q * I.v2_y2d2 + 9.0 / 16.0 * I.v2_y2d4};
    });
  }
  return detail::halfspace_report(v, N, panels, [&](const HalfSpaceIntegrals& I) {
    return detail::Sides{I.lap + 0.5 * (n * n - 2 * n - 4) * I.grad_y2,
                         9.0 * (2 * n * n - 4 * n - 7) / 16.0 * I.v2_y4 + q * I.v2_y4d2 + 9.0 / 16.0 * I.v2_y4d4};
  });
}

/// int |grad v|^2/y^2 >= (9/4) int v^2/y^4
inline HardyReport check_halfspace_gradient_hardy(const HalfSpaceFunction& v, int N, std::size_t panels = 24) {
  return detail::halfspace_report(v, N, panels, [](const HalfSpaceIntegrals& I) {
    return detail::Sides{I.grad_y2, 2.25 * I.v2_y4};
  });
}

/// omega_(N-1) int |grad u|^2 dV against
/// int |grad v|^2 + ((N-1)^2/4 - 1/4) int v^2/y^2 for v = y^(-(N-2)/2) u.
inline IdentityCheck halfspace_gradient_identity(const RadialFunction& U, int N, std::size_t panels = 24) {
  const auto H = ModelManifold::hyperbolic(N);
  const double lhs = sphere_area(N - 1) * dirichlet_form(U, H, support_rule(U, 32));
  const auto I = halfspace_integrals(halfspace_from_radial(U, 0.5 * (N - 2)), N, panels);
  const double c = 0.25 * (N - 1) * (N - 1) - 0.25;
  return detail::make_identity(lhs, I.grad + c * I.v2_y2);
}

/// omega_(N-1) int (Delta u)^2 dV against its half-space form:
///   y2_weight: int y^2 (Delta v)^2 + (N(N-2)/2) int |grad v|^2 + (N^2(N-2)^2/16) int v^2/y^2
///   y4_weight: int (Delta v)^2 + ((N^2-2N-4)/2) int |grad v|^2/y^2 + ((N-4)^2(N+2)^2/16) int v^2/y^4
inline IdentityCheck halfspace_bilaplacian_identity(const RadialFunction& U, int N, HalfSpaceRellich which,
                                                    std::size_t panels = 24) {
  if (N < 3) throw DomainError("halfspace_bilaplacian_identity: N must be >= 3");
  const auto H = ModelManifold::hyperbolic(N);
  const double n = N;
  const double lhs = sphere_area(N - 1) * bilaplacian_form(U, H, support_rule(U, 32));
  const auto I = halfspace_integrals(halfspace_from_radial(U, halfspace_rellich_alpha(N, which)), N, panels);
  const double rhs = which == HalfSpaceRellich::y2_weight
                         ? I.lap_y2 + 0.5 * n * (n - 2) * I.grad + n * n * (n - 2) * (n - 2) / 16.0 * I.v2_y2
                         : I.lap + 0.5 * (n * n - 2 * n - 4) * I.grad_y2 +
                               (n - 4) * (n - 4) * (n + 2) * (n + 2) / 16.0 * I.v2_y4;
  return detail::make_identity(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Hyperbolic Laplacian under u = y^alpha v

enum class MiddleTerm { corrected, literal };

inline std::string to_string(MiddleTerm m) { return m == MiddleTerm::corrected ? "corrected" : "literal"; }

struct LaplacianTransferResidual {
  /// y^2 Delta u - (N-2) y u_y with u = y^alpha v, by automatic differentiation.
  double direct = 0.0;
  /// y^(alpha+2) Delta v + (2 alpha - (N-2)) y^p v_y + alpha (alpha - (N-1)) y^alpha v,
  /// p = alpha + 1 (corrected) or alpha (literal).
  double formula = 0.0;
  /// |direct - formula| / max(1, |direct|)
  double residual = 0.0;
};

/// N-dimensional Cartesian jets: x_1 .. x_(N-1) then y.
template <std::size_t N>
using CartesianTestFn = std::function<LapJet<N>(const std::array<LapJet<N>, N - 1>&, const LapJet<N>&)>;

template <std::size_t N, class V>
LaplacianTransferResidual lemma71_check(V&& v, double alpha, const std::array<double, N - 1>& x, double y,
                              MiddleTerm term = MiddleTerm::corrected) {
  static_assert(N >= 3, "lemma71_check: N must be >= 3");
  if (!(y > 0.0)) throw DomainError("lemma71_check: need y > 0");
  std::array<LapJet<N>, N - 1> xs;
  for (std::size_t i = 0; i + 1 < N; ++i) xs[i] = LapJet<N>::variable(x[i], i);
  const LapJet<N> yj = LapJet<N>::variable(y, N - 1);
  const LapJet<N> vj = v(xs, yj);
  const LapJet<N> u = pow(yj, alpha) * vj;
  const double n = N;
  LaplacianTransferResidual out;
  out.direct = y * y * u.laplacian() - (n - 2) * y * u.g[N - 1];
  const double p = term == MiddleTerm::corrected ? alpha + 1.0 : alpha;
  out.formula = std::pow(y, alpha + 2.0) * vj.laplacian() + (2.0 * alpha - (n - 2)) * std::pow(y, p) * vj.g[N - 1] +
                alpha * (alpha - (n - 1)) * std::pow(y, alpha) * vj.v;
  out.residual = std::abs(out.direct - out.formula) / std::max(1.0, std::abs(out.direct));
  return out;
}

/// Five polynomial test functions of (x, y).
template <std::size_t N>
std::vector<std::pair<std::string, CartesianTestFn<N>>> laplacian_transfer_polynomials() {
  using J = LapJet<N>;
  using X = std::array<J, N - 1>;
  auto norm2 = [](const X& x) {
    J s(0.0);
    for (const auto& xi : x) s = s + xi * xi;
    return s;
  };
  const std::size_t last = N - 2;
  return {
      {"x1^2+y^3", [](const X& x, const J& y) { return x[0] * x[0] + y * y * y; }},
      {"x1*xl*y+y^2", [last](const X& x, const J& y) { return x[0] * x[last] * y + y * y; }},
      {"(|x|^2+y^2)^2",
       [norm2](const X& x, const J& y) {
         const J s = norm2(x) + y * y;
         return s * s;
       }},
      {"1+x1-2y+x1^2y^2", [](const X& x, const J& y) { return 1.0 + x[0] - 2.0 * y + x[0] * x[0] * y * y; }},
      {"y^4*xl-x1^3+3", [last](const X& x, const J& y) { return y * y * y * y * x[last] - x[0] * x[0] * x[0] + 3.0; }},
  };
}

struct LaplacianTransferSuite {
  MiddleTerm term = MiddleTerm::corrected;
  std::size_t cases = 0;
  /// cases with residual above the tolerance
  std::size_t failures = 0;
  double max_residual = 0.0;
  double tolerance = 1e-10;
  bool passes() const { return failures == 0; }
};

/// Polynomial suite x alphas x seeded points with x in [-1, 1]^(N-1), y in [0.25, 4].
template <std::size_t N>
LaplacianTransferSuite run_laplacian_transfer_suite(MiddleTerm term, const std::vector<double>& alphas, std::uint64_t seed = 71,
                                     std::size_t points = 10, double tol = 1e-10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> X(-1.0, 1.0), Y(std::log(0.25), std::log(4.0));
  std::vector<std::pair<std::array<double, N - 1>, double>> pts(points);
  for (auto& [x, y] : pts) {
    for (auto& xi : x) xi = X(rng);
    y = std::exp(Y(rng));
  }
  LaplacianTransferSuite res;
  res.term = term;
  res.tolerance = tol;
  for (const auto& fn : laplacian_transfer_polynomials<N>()) {
    for (double a : alphas) {
      for (const auto& [x, y] : pts) {
        const auto r = lemma71_check<N>(fn.second, a, x, y, term);
        ++res.cases;
        res.max_residual = std::max(res.max_residual, r.residual);
        if (!(r.residual < tol)) ++res.failures;
      }
    }
  }
  return res;
}

/// The three exponents 0, (N-4)/2 and 1.
inline std::vector<double> laplacian_transfer_alphas(int N) { return {0.0, 0.5 * (N - 4), 1.0}; }

}  // namespace hyperhardy
