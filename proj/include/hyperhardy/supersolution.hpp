#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/forms.hpp"
#include "hyperhardy/iterated_log.hpp"
#include "hyperhardy/manifold.hpp"
#include "hyperhardy/radial_function.hpp"

namespace hyperhardy {

/// Residual of an identity LHS = RHS, with everything divided by a positive
/// common factor. `relative` is |LHS - RHS| over the largest single term.
struct IdentityResidual {
  double absolute = 0.0;
  double scale = 0.0;
  double relative = 0.0;
};

namespace detail {

inline IdentityResidual residual_of(double lhs, double rhs, std::initializer_list<double> terms) {
  IdentityResidual out;
  out.absolute = lhs - rhs;
  for (double t : terms) out.scale = std::max(out.scale, std::abs(t));
  if (!std::isfinite(out.absolute) || !std::isfinite(out.scale))
    throw NumericError("identity residual overflowed");
  out.relative = out.scale > 0.0 ? std::abs(out.absolute) / out.scale : std::abs(out.absolute);
  return out;
}

}  // namespace detail

/// Phi = (psi/r)^alpha times a multiplier f, with derivatives through
/// logarithmic derivatives so that Phi itself is never formed at large r.
struct SupersolutionProfile {
  ModelManifold M;
  double alpha;
  RadialFunction f;

  double log_phi(double r) const { return alpha * (M.log_psi(r) - std::log(r)); }
  /// Phi'/Phi
  double phi_d1(double r) const { return alpha * (M.log_derivative(r) - 1.0 / r); }
  /// Phi''/Phi
  double phi_d2(double r) const {
    const double g = phi_d1(r);
    const double p = M.log_derivative(r);
    return g * g + alpha * (M.second_ratio(r) - p * p + 1.0 / (r * r));
  }

  double value(double r) const { return std::exp(log_phi(r)) * f.value(r); }
  double d1(double r) const { return std::exp(log_phi(r)) * (phi_d1(r) * f.value(r) + f.d1(r)); }
  double d2(double r) const {
    return std::exp(log_phi(r)) * (phi_d2(r) * f.value(r) + 2.0 * phi_d1(r) * f.d1(r) + f.d2(r));
  }
};

/// f = r^((2-N)/2)
inline RadialFunction power_profile(int N) {
  const double b = 0.5 * (2 - N);
  return RadialFunction::closed_form([b](double r) { return std::pow(r, b); },
                                     [b](double r) { return b * std::pow(r, b - 1.0); },
                                     [b](double r) { return b * (b - 1.0) * std::pow(r, b - 2.0); }, {},
                                     "r^((2-N)/2)");
}

/// f = r^((2-N)/2) log(r^(2-N)), the second Euler solution.
inline RadialFunction log_profile(int N) {
  const double b = 0.5 * (2 - N);
  const double c = 2.0 - N;
  return RadialFunction::closed_form(
      [=](double r) { return std::pow(r, b) * c * std::log(r); },
      [=](double r) { return std::pow(r, b - 1.0) * (b * c * std::log(r) + c); },
      [=](double r) { return std::pow(r, b - 2.0) * (b * (b - 1.0) * c * std::log(r) + c * (2.0 * b - 1.0)); }, {},
      "r^((2-N)/2) log(r^(2-N))");
}

/// f_k = r^((2-N)/2) X_1^(-1/2) ... X_k^(-1/2) on (0, 1].
inline RadialFunction iterated_log_profile(int N, int k) {
  const double b = 0.5 * (2 - N);
  auto jet = [=](double r) {
    const auto L = iterated_logs(k, r);
    double logf = b * std::log(r), S = 0.0, dS = 0.0, cum = 0.0;
    for (int i = 0; i < k; ++i) {
      logf -= 0.5 * std::log(L.X[i]);
      S += L.P[i];
      cum += L.P[i];
      dS += L.P[i] * cum / r;
    }
    const double f = std::exp(logf);
    const double l1 = (b - 0.5 * S) / r;
    const double l2 = -(b - 0.5 * S) / (r * r) - 0.5 * dS / r;
    return Jet2{f, f * l1, f * (l1 * l1 + l2)};
  };
  return from_jet(jet, {0.0, 1.0}, "f_" + std::to_string(k));
}

/// Curvature identity for the power warp Phi = (psi/r)^alpha, divided through by Phi:
///   -Delta Phi - alpha K_rad Phi - alpha(alpha+N-2) K_tan Phi
///     = [-alpha(alpha+N-2)/psi^2 - alpha(alpha+1)/r^2 + (2alpha^2 + alpha(N-1)) psi'/(r psi)] Phi
inline IdentityResidual lemma42_residual(const ModelManifold& M, double alpha, double r) {
  const int N = M.dimension();
  const SupersolutionProfile prof{M, alpha, {}};
  const double p = M.log_derivative(r);
  const double minus_lap = -prof.phi_d2(r) - (N - 1) * p * prof.phi_d1(r);
  const double K = curvature_rad(M, r);
  const double H = curvature_tan(M, r);
  const double t_curv = -alpha * K;
  const double t_tan = -alpha * (alpha - 2.0 + N) * H;
  const double lhs = minus_lap + t_curv + t_tan;
  const double r1 = -alpha * (alpha - 2.0 + N) * M.inverse_square(r);
  const double r2 = -alpha * (alpha + 1.0) / (r * r);
  const double r3 = (2.0 * alpha * alpha + alpha * (N - 1)) * p / r;
  return detail::residual_of(lhs, r1 + r2 + r3, {minus_lap, t_curv, t_tan, r1, r2, r3});
}

/// -Delta_g(Phi f)/Phi with Phi = (r/psi)^((N-1)/2).
inline double minus_laplacian_over_phi(const ModelManifold& M, const RadialFunction& f, double r) {
  const int N = M.dimension();
  const SupersolutionProfile prof{M, -0.5 * (N - 1), {}};
  const double fv = f.value(r), f1 = f.d1(r), f2 = f.d2(r);
  const double d1 = prof.phi_d1(r) * fv + f1;
  const double d2 = prof.phi_d2(r) * fv + 2.0 * prof.phi_d1(r) * f1 + f2;
  return -d2 - (N - 1) * M.log_derivative(r) * d1;
}

/// Multiplier identity for Phi~ = Phi f, Phi = (r/psi)^((N-1)/2), divided through by Phi:
///   -Delta Phi~ + ((N-1)/4)(2 K_rad + (N-3) K_tan) Phi~
///     = ((N-1)(N-3)/4)(1/psi^2 - 1/r^2) Phi~ - (f'' + (N-1) f'/r) Phi
inline IdentityResidual prop43_residual(const ModelManifold& M, const RadialFunction& f, double r) {
  if (!f.has_d1() || !f.has_d2()) throw CapabilityError("prop43_residual needs f' and f''");
  const int N = M.dimension();
  const double fv = f.value(r);
  const double lap = minus_laplacian_over_phi(M, f, r);
  const double pot = 0.25 * (N - 1) * (2.0 * curvature_rad(M, r) + (N - 3) * curvature_tan(M, r)) * fv;
  const double c = 0.25 * (N - 1) * (N - 3);
  const double r1 = c * fv * M.inverse_square(r);
  const double r2 = -c * fv / (r * r);
  const double r3 = -(f.d2(r) + (N - 1) / r * f.d1(r));
  return detail::residual_of(lap + pot, r1 + r2 + r3, {lap, pot, r1, r2, r3});
}

/// Right side of the multiplier identity for f = r^((2-N)/2), divided by Phi~:
/// (N-1)(N-3)/(4 psi^2) + 1/(4 r^2).
inline double prop43_power_rhs(const ModelManifold& M, double r) {
  const int N = M.dimension();
  return 0.25 * (N - 1) * (N - 3) * M.inverse_square(r) + 0.25 / (r * r);
}

/// -Delta Phi~ - w Phi~ - (N-1)(N-3)/(4 psi^2) Phi~ - Phi~/(4 r^2) = 0 on models.
inline IdentityResidual theorem25_residual(const ModelManifold& M, double r) {
  const int N = M.dimension();
  const auto f = power_profile(N);
  const double fv = f.value(r);
  const double lap = minus_laplacian_over_phi(M, f, r) / fv;
  const double w = hardy_weight_general(M, r);
  const double s = 0.25 * (N - 1) * (N - 3) * M.inverse_square(r);
  const double h = 0.25 / (r * r);
  return detail::residual_of(lap, w + s + h, {lap, w, s, h});
}

namespace detail {

inline void require_dimension(int N) {
  if (N < 3) throw DomainError("dimension must be >= 3");
}

inline double log_hyperbolic_phi(int N, double r) {
  const auto H = ModelManifold::hyperbolic(N);
  return 0.5 * (N - 1) * (std::log(r) - H.log_psi(r));
}

}  // namespace detail

/// log v+(r); finite for every r > 0.
inline double log_ground_state(int N, double r) {
  detail::require_dimension(N);
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  return detail::log_hyperbolic_phi(N, r) + 0.5 * (2 - N) * std::log(r);
}

/// v+(r) = (r/sinh r)^((N-1)/2) r^((2-N)/2), evaluated in the log domain.
/// Underflows to zero beyond r of a few hundred; use log_ground_state there.
inline double ground_state(int N, double r) { return std::exp(log_ground_state(N, r)); }

/// v-(r) = (r/sinh r)^((N-1)/2) r^((2-N)/2) log(r^(2-N)); changes sign at r = 1.
inline double second_solution(int N, double r) { return ground_state(N, r) * (2 - N) * std::log(r); }

/// Relative residual of H v+ = 0 with
/// H = -Delta - (N-1)^2/4 - 1/(4 r^2) - (N-1)(N-3)/(4 sinh^2 r).
inline IdentityResidual ground_state_residual(int N, double r) {
  detail::require_dimension(N);
  const auto H = ModelManifold::hyperbolic(N);
  const auto f = power_profile(N);
  const double fv = f.value(r);
  const double lap = minus_laplacian_over_phi(H, f, r) / fv;
  const double c0 = 0.25 * (N - 1) * (N - 1);
  const double c1 = 0.25 / (r * r);
  const double c2 = 0.25 * (N - 1) * (N - 3) * H.inverse_square(r);
  return detail::residual_of(lap, c0 + c1 + c2, {lap, c0, c1, c2});
}

struct GrowthRatios {
  double at_zero;
  double at_infinity;
};

/// v+/|v-| at a small and a large radius. Both equal 1/|(N-2) log r|.
inline GrowthRatios minimal_growth_ratios(int N, double r_small, double r_large) {
  detail::require_dimension(N);
  for (double r : {r_small, r_large}) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (std::log(r) == 0.0) throw ResampleError("v- vanishes at r = 1", r * 1.01);
  }
  if (!(r_small < 1.0) || !(r_large > 1.0)) throw DomainError("need r_small < 1 < r_large");
  auto ratio = [N](double r) { return 1.0 / std::abs((N - 2) * std::log(r)); };
  return {ratio(r_small), ratio(r_large)};
}

/// int_{e^-k}^{1} v+^2 W psi^(N-1) dr with W = 1/(4 r^2). The integrand
/// is reduced to 1/(4 r) before integration.
inline std::vector<std::pair<double, double>> null_criticality_scan(int N, const std::vector<double>& ks) {
  detail::require_dimension(N);
  std::vector<std::pair<double, double>> out;
  for (double k : ks) {
    if (!(k > 0.0)) throw ArgumentError("null_criticality_scan: k must be positive");
    const auto rule = gauss_rule({std::exp(-k), 1.0}, 64, true);
    out.emplace_back(k, rule.integrate([](double r) { return 0.25 / r; }));
  }
  return out;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw ArgumentError("fit_slope: need two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

enum class MonotoneVerdict { nonincreasing, increasing_somewhere, inapplicable };

/// Phi~ = (r/psi)^((N-1)/2) r^((2-N)/2) nonincreasing over the grid points,
/// provided (N-2)psi' + (N-1) r psi'' >= 0 there.
inline MonotoneVerdict check_monotone_lemma44(const ModelManifold& M, const RadialGrid& grid) {
  if (!check_condition_2_8(M, grid).holds) return MonotoneVerdict::inapplicable;
  const int N = M.dimension();
  auto log_phi = [&](double r) { return 0.5 * (N - 1) * (std::log(r) - M.log_psi(r)) + 0.5 * (2 - N) * std::log(r); };
  const auto pts = grid.points();
  double prev = log_phi(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double cur = log_phi(pts[i]);
    if (cur > prev + 1e-14 * std::max(1.0, std::abs(prev))) return MonotoneVerdict::increasing_somewhere;
    prev = cur;
  }
  return MonotoneVerdict::nonincreasing;
}

/// The fixed 64-point log-spaced sample of [1e-3, 30] used by identity checks.
inline std::vector<double> identity_sample_points() {
  std::vector<double> r(64);
  for (int i = 0; i < 64; ++i) r[i] = 1e-3 * std::pow(3e4, i / 63.0);
  return r;
}

}  // namespace hyperhardy
