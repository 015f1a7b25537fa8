#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/forms.hpp"
#include "hyperhardy/grid.hpp"
#include "hyperhardy/hardy.hpp"
#include "hyperhardy/manifold.hpp"
#include "hyperhardy/pencil.hpp"
#include "hyperhardy/radial_function.hpp"

namespace hyperhardy {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Spherical-harmonic mode coefficients

namespace detail {

inline void require_rellich_dimension(int N, const char* who) {
  if (N < 5) throw DomainError(std::string(who) + ": N must be >= 5");
}

inline cpp_int binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  cpp_int b = 1;
  for (long i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace detail

/// lambda_n = n^2 + (N-2) n, eigenvalue of -Delta on S^(N-1).
inline long mode_eigenvalue(int n, int N) {
  if (n < 0) throw DomainError("mode_eigenvalue: n must be >= 0");
  if (N < 3) throw DomainError("mode_eigenvalue: N must be >= 3");
  return static_cast<long>(n) * n + static_cast<long>(N - 2) * n;
}

/// Dimension of the degree-n spherical harmonics on S^(N-1).
inline cpp_int mode_multiplicity(int n, int N) {
  if (n < 0) throw DomainError("mode_multiplicity: n must be >= 0");
  if (N < 2) throw DomainError("mode_multiplicity: N must be >= 2");
  return detail::binomial(N + n - 1, n) - detail::binomial(N + n - 3, n - 2);
}

/// A_n = lambda^2 + (N(N-4)/2) lambda + ((N-1)(N-3))^2/16 - (3/8)(N-1)(N-3)
inline cpp_rational coeff_A_exact(int n, int N) {
  detail::require_rellich_dimension(N, "coeff_A");
  const cpp_rational lam = mode_eigenvalue(n, N);
  const cpp_rational p = cpp_rational((N - 1) * (N - 3));
  return lam * lam + cpp_rational(N * (N - 4), 2) * lam + p * p / 16 - cpp_rational(3, 8) * p;
}

/// B_n = ((N+1)(N-3)/2) lambda + (N-1)^2 (N-3)/4 + ((N-1)(N-3))^2/8 - (N-1)(N-3)/2
inline cpp_rational coeff_B_exact(int n, int N) {
  detail::require_rellich_dimension(N, "coeff_B");
  const cpp_rational lam = mode_eigenvalue(n, N);
  const cpp_rational p = cpp_rational((N - 1) * (N - 3));
  return cpp_rational((N + 1) * (N - 3), 2) * lam + cpp_rational((N - 1) * (N - 1) * (N - 3), 4) + p * p / 8 - p / 2;
}

inline double coeff_A(int n, int N) { return static_cast<double>(coeff_A_exact(n, N)); }
inline double coeff_B(int n, int N) { return static_cast<double>(coeff_B_exact(n, N)); }

/// Closed forms of min_n A_n and min_n B_n.
inline cpp_rational min_A_closed_form(int N) {
  return cpp_rational(static_cast<long>(N - 1) * (N - 3) * (N * N - 4 * N - 3), 16);
}
inline cpp_rational min_B_closed_form(int N) {
  return cpp_rational(static_cast<long>(N * N - 1) * (N - 3) * (N - 3), 8);
}

struct ModeCoefficients {
  int n = 0;
  long lambda_n = 0;
  cpp_int d_n = 0;
  cpp_rational A_n = 0;
  cpp_rational B_n = 0;
};

inline ModeCoefficients mode_coefficients(int n, int N) {
  return {n, mode_eigenvalue(n, N), mode_multiplicity(n, N), coeff_A_exact(n, N), coeff_B_exact(n, N)};
}

inline std::vector<ModeCoefficients> mode_table(int N, int n_max) {
  if (n_max < 0) throw ArgumentError("mode_table: n_max must be >= 0");
  std::vector<ModeCoefficients> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(mode_coefficients(n, N));
  return out;
}

struct ExactMinimum {
  cpp_rational value;
  int argmin = 0;
};

inline ExactMinimum min_coeff_A(int N, int n_max) {
  ExactMinimum best{coeff_A_exact(0, N), 0};
  for (int n = 1; n <= n_max; ++n) {
    auto a = coeff_A_exact(n, N);
    if (a < best.value) best = {a, n};
  }
  return best;
}

inline ExactMinimum min_coeff_B(int N, int n_max) {
  ExactMinimum best{coeff_B_exact(0, N), 0};
  for (int n = 1; n <= n_max; ++n) {
    auto b = coeff_B_exact(n, N);
    if (b < best.value) best = {b, n};
  }
  return best;
}

struct IntegerIdentity {
  bool holds = false;
  /// false when N lies outside N >= 5; the identity itself is still evaluated.
  bool in_range = false;
  cpp_int lhs = 0;
  cpp_int rhs = 0;
};

/// 9 + (N-1)(N-3)(N^2-4N-3) == N^2 (N-4)^2, i.e. 16x the joint-sharpness identity.
inline IntegerIdentity verify_remark31_identity(int N) {
  IntegerIdentity out;
  const cpp_int n = N;
  out.lhs = 9 + (n - 1) * (n - 3) * (n * n - 4 * n - 3);
  out.rhs = n * n * (n - 4) * (n - 4);
  out.holds = out.lhs == out.rhs;
  out.in_range = N >= 5;
  return out;
}

// ---------------------------------------------------------------------------
// One-dimensional inequalities and the reduced bilaplacian form

namespace detail {

inline double inv_sinh2(double r) {
  const double s = std::sinh(r);
  return 1.0 / (s * s);
}

inline HardyReport flat_report(const RadialFunction& u, const std::string& family,
                               const std::function<Sides(const QuadratureRule&)>& eval) {
  const Sides fine = eval(support_rule(u, 32));
  const Sides coarse = eval(support_rule(u, 16));
  HardyReport rep;
  rep.N = 1;
  rep.family = family;
  rep.test_id = u.id();
  rep.lhs = fine.lhs;
  rep.rhs = fine.rhs;
  rep.margin = fine.lhs - fine.rhs;
  rep.quad_error = std::abs(rep.margin - (coarse.lhs - coarse.rhs));
  return rep;
}

}  // namespace detail

/// int u'^2/sinh^2 >= (9/4) int u^2/sinh^4 + int u^2/sinh^2 on the half-line.
inline HardyReport check_lemma61(const RadialFunction& u) {
  require_compact_support(u, 0.0, std::numeric_limits<double>::infinity());
  return detail::flat_report(u, "half-line", [&](const QuadratureRule& rule) {
    const double lhs = integrate_checked(rule, [&](double r) { return u.d1(r) * u.d1(r) * detail::inv_sinh2(r); });
    const double s4 = integrate_checked(rule, [&](double r) {
      const double w = detail::inv_sinh2(r);
      return u.value(r) * u.value(r) * w * w;
    });
    const double s2 = integrate_checked(rule, [&](double r) { return u.value(r) * u.value(r) * detail::inv_sinh2(r); });
    return detail::Sides{lhs, 2.25 * s4 + s2};
  });
}

inline HardyReport check_lemma61(const RadialFunction& u, const RadialGrid& grid) {
  require_compact_support(u, grid.r_min(), grid.r_max());
  return check_lemma61(u);
}

/// d = sinh(r)^((N-1)/2) u with its first two derivatives.
inline RadialFunction liouville_transform(const RadialFunction& u, int N) {
  if (!u.has_d1() || !u.has_d2()) throw CapabilityError("liouville_transform needs u' and u''");
  const double k = 0.5 * (N - 1);
  auto jet = [u, k](double r) {
    const double w = std::pow(std::sinh(r), k);
    const double c = 1.0 / std::tanh(r);
    const double w1 = k * c * w;
    const double w2 = w * (k * (k - 1.0) * c * c + k);
    const double f = u.value(r), f1 = u.d1(r), f2 = u.d2(r);
    return Jet2{w * f, w1 * f + w * f1, w2 * f + 2.0 * w1 * f1 + w * f2};
  };
  return from_jet(jet, u.support(), "liouville(" + u.id() + ")");
}

/// int (d'' - ((N-1)(N-3)/4) coth^2 d - ((N-1)/2) d - (lambda_n/sinh^2) d)^2 dr
inline double radial_reduced_form(const RadialFunction& d, int N, int n, const QuadratureRule& rule) {
  if (!d.has_d2()) throw CapabilityError("radial_reduced_form needs d''");
  const double a = 0.25 * (N - 1) * (N - 3);
  const double b = 0.5 * (N - 1);
  const double lam = static_cast<double>(mode_eigenvalue(n, N));
  return integrate_checked(rule, [&](double r) {
    const double v = d.value(r), v2 = d.d2(r);
    if (v == 0.0 && v2 == 0.0) return 0.0;
    const double c = 1.0 / std::tanh(r);
    const double L = v2 - a * c * c * v - b * v - lam * detail::inv_sinh2(r) * v;
    return L * L;
  });
}

inline double radial_reduced_form(const RadialFunction& d, int N, int n) {
  return radial_reduced_form(d, N, n, support_rule(d));
}

inline double radial_reduced_form(const RadialFunction& d, int N, int n, const RadialGrid& grid) {
  require_compact_support(d, grid.r_min(), grid.r_max());
  return radial_reduced_form(d, N, n);
}

/// Per-mode lower bound: reduced form >= (9/16) int d^2/r^4 + ((N-1)^2/8) int d^2/r^2
///   + ((N-1)^4/16) int d^2 + A_n int d^2/sinh^4 + B_n int d^2/sinh^2.
inline HardyReport check_mode_chain(const RadialFunction& d, int N, int n) {
  detail::require_rellich_dimension(N, "check_mode_chain");
  require_compact_support(d, 0.0, std::numeric_limits<double>::infinity());
  const double A = coeff_A(n, N), B = coeff_B(n, N);
  const double q = (N - 1) * (N - 1);
  auto rep = detail::flat_report(d, "mode " + std::to_string(n), [&](const QuadratureRule& rule) {
    auto sq = [&](auto w) { return integrate_checked(rule, [&](double r) { return d.value(r) * d.value(r) * w(r); }); };
    const double lhs = radial_reduced_form(d, N, n, rule);
    const double rhs = 9.0 / 16.0 * sq([](double r) { return 1.0 / (r * r * r * r); }) +
                       q / 8.0 * sq([](double r) { return 1.0 / (r * r); }) + q * q / 16.0 * sq([](double) { return 1.0; }) +
                       A * sq([](double r) {
                         const double w = detail::inv_sinh2(r);
                         return w * w;
                       }) +
                       B * sq(detail::inv_sinh2);
    return detail::Sides{lhs, rhs};
  });
  rep.N = N;
  return rep;
}

/// Poincare-Rellich inequality on hyperbolic space for radial u:
///   int (Delta u)^2 - ((N-1)^4/16) int u^2 >= ((N-1)^2/8) int u^2/r^2 + (9/16) int u^2/r^4
///     + ((N^2-1)(N-3)^2/8) int u^2/sinh^2 + ((N-1)(N-3)(N^2-4N-3)/16) int u^2/sinh^4.
inline HardyReport check_theorem31(const RadialFunction& u, int N) {
  detail::require_rellich_dimension(N, "check_theorem31");
  require_compact_support(u, 0.0, std::numeric_limits<double>::infinity());
  const auto H = ModelManifold::hyperbolic(N);
  const double q = (N - 1) * (N - 1);
  const double c2 = static_cast<double>(min_B_closed_form(N));
  const double c4 = static_cast<double>(min_A_closed_form(N));
  return detail::two_level_report(u, H, [&](const QuadratureRule& rule) {
    auto sq = [&](auto w) { return weighted_l2(u, w, H, rule); };
    const double lhs = bilaplacian_form(u, H, rule) - q * q / 16.0 * sq(detail::one);
    const double rhs = q / 8.0 * sq(detail::inv_r2) + 9.0 / 16.0 * sq([](double r) { return 1.0 / (r * r * r * r); }) +
                       c2 * sq([&](double r) { return H.inverse_square(r); }) + c4 * sq([&](double r) {
                         const double w = H.inverse_square(r);
                         return w * w;
                       });
    return detail::Sides{lhs, rhs};
  });
}

/// Bottom of int (Delta u)^2 / int u^2/r^4 over radial u in R^N; tends to N^2(N-4)^2/16.
inline ConstantEstimate estimate_euclidean_rellich(int N, double r_min = 1e-10, double r_max = 1e10,
                                                   std::size_t M_grid = 8192, const EigenOptions& opt = {}) {
  detail::require_rellich_dimension(N, "estimate_euclidean_rellich");
  auto P = assemble_pencil(ModelManifold::euclidean(N), [](double) { return 0.0; },
                           [](double r) { return 1.0 / (r * r * r * r); },
                           make_grid(r_min, r_max, M_grid, Grading::geometric), PencilOrder::fourth);
  return min_generalized_eigenvalue(P, opt);
}

/// Bottom of [int (Delta u)^2 - ((N-1)^4/16) int u^2] / int u^2/r^2 over radial u.
inline ConstantEstimate estimate_sharp_rellich_r2(int N, double r_min, double r_max, std::size_t M_grid,
                                                  Grading grading = Grading::geometric,
                                                  const EigenOptions& opt = {}) {
  detail::require_rellich_dimension(N, "estimate_sharp_rellich_r2");
  const auto H = ModelManifold::hyperbolic(N);
  const double q = (N - 1) * (N - 1);
  const double V = q * q / 16.0;
  auto P = assemble_pencil(H, [V](double) { return V; }, detail::inv_r2, make_grid(r_min, r_max, M_grid, grading),
                           PencilOrder::fourth);
  auto est = min_generalized_eigenvalue(P, opt);
  if (!(est.value > 0.0)) {
    throw TruncationError("Rellich pencil is indefinite on [" + std::to_string(r_min) + ", " +
                          std::to_string(r_max) + "]: truncation too small");
  }
  return est;
}

/// Bottom of int z''^2 / int z^2/x^4 on [r_min, r_max]; tends to 9/16.
inline ConstantEstimate one_dimensional_rellich(double r_min, double r_max, std::size_t M_grid,
                                                const EigenOptions& opt = {}) {
  auto P = assemble_flat_pencil([](double) { return 0.0; }, [](double r) { return 1.0 / (r * r * r * r); },
                                make_grid(r_min, r_max, M_grid, Grading::geometric), PencilOrder::fourth);
  auto est = min_generalized_eigenvalue(P, opt);
  est.label = "one-dimensional";
  return est;
}

/// Bottom of int z'^2 / int z^2/x^2 on [r_min, r_max]; tends to 1/4. Rescaled by
/// (N-1)^2/2 it bounds the admissible constant in front of the 1/r^2 term.
inline ConstantEstimate prop66_limit_constant(double r_min = 1e-12, double r_max = 1e12, std::size_t M_grid = 8192,
                                              const EigenOptions& opt = {}) {
  auto P = assemble_flat_pencil([](double) { return 0.0; }, detail::inv_r2,
                                make_grid(r_min, r_max, M_grid, Grading::geometric), PencilOrder::second);
  auto est = min_generalized_eigenvalue(P, opt);
  est.label = "one-dimensional";
  return est;
}

inline double rellich_r2_upper_bound(int N, const ConstantEstimate& limit) {
  return 0.5 * (N - 1) * (N - 1) * limit.value;
}

// ---------------------------------------------------------------------------
// The change of variables ds/s^(N-1) = dr/sinh^(N-1) r

/// Asymptotic constants of s(r) = c1 e^(mu r) - c2 e^(-nu r) + ...
struct AsymptoticConstants {
  int N = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double k1 = 0.0;
  /// c1^(N-2) = (N-1) / (2^(N-1) (N-2))
  cpp_rational c1_power;
  cpp_rational c2_over_c1;
  /// k1 = 2(N-1)(c2/c1 - 1)
  cpp_rational k1_exact;
  /// k1 - 2 c2/c1 == -4(N-1)/(N+1)
  bool consistent = false;
  double mu = 0.0;
  double nu = 0.0;
};

inline AsymptoticConstants asymptotic_constants(int N) {
  detail::require_rellich_dimension(N, "asymptotic_constants");
  AsymptoticConstants a;
  a.N = N;
  a.c1_power = cpp_rational(cpp_int(N - 1), cpp_int(N - 2) * (cpp_int(1) << (N - 1)));
  a.c2_over_c1 = cpp_rational((N - 1) * (N - 1), (N + 1) * (N - 2));
  a.k1_exact = 2 * (N - 1) * (a.c2_over_c1 - 1);
  a.consistent = a.k1_exact - 2 * a.c2_over_c1 == cpp_rational(-4 * (N - 1), N + 1);
  a.c1 = std::pow(static_cast<double>(a.c1_power), 1.0 / (N - 2));
  a.c2 = a.c1 * static_cast<double>(a.c2_over_c1);
  a.k1 = static_cast<double>(a.k1_exact);
  a.mu = static_cast<double>(N - 1) / (N - 2);
  a.nu = static_cast<double>(N - 3) / (N - 2);
  return a;
}

namespace detail {

// S(Y) = sum_j C(N-2+j, j) Y^(2j) / (N-1+2j) minus its j = 0 term, so that
//   int_r^inf dsigma / sinh^(N-1) = 2^(N-1) Y^(N-1) (1/(N-1) + tail),  Y = e^-r.
inline double tail_series_excess(int N, double Y) {
  const double y2 = Y * Y;
  double b = 1.0, p = 1.0, sum = 0.0;
  for (int j = 1; j < 2000; ++j) {
    b *= static_cast<double>(N - 2 + j) / j;
    p *= y2;
    const double term = b * p / (N - 1 + 2 * j);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

constexpr double kSeriesThreshold = 2.0;

// log of int_r^inf dsigma / sinh^(N-1) sigma.
inline double log_sinh_tail(int N, double r) {
  if (r >= kSeriesThreshold) {
    const double Y = std::exp(-r);
    const double S = 1.0 / (N - 1) + tail_series_excess(N, Y);
    return (N - 1) * (std::log(2.0) - r) + std::log(S);
  }
  const std::size_t panels = 8 + 4 * static_cast<std::size_t>(std::ceil(std::log(kSeriesThreshold / r)));
  const auto rule = gauss_rule({r, kSeriesThreshold}, panels, true);
  double body = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) body += rule.weights[i] * std::pow(std::sinh(rule.nodes[i]), 1 - N);
  return std::log(body + std::exp(log_sinh_tail(N, kSeriesThreshold)));
}

}  // namespace detail

/// s(r) from ds/s^(N-1) = dr/sinh^(N-1) r with s ~ r at the pole.
inline double s_of_r(int N, double r) {
  if (N < 3) throw DomainError("s_of_r: N must be >= 3");
  if (!(r > 0.0)) throw DomainError("s_of_r: r must be positive");
  return std::exp(-(std::log(static_cast<double>(N - 2)) + detail::log_sinh_tail(N, r)) / (N - 2));
}

/// (s(r) - c1 e^(mu r) + c2 e^(-nu r)) / e^(-nu r), evaluated without cancellation (r >= 2).
inline double expansion_residual(int N, double r) {
  const auto a = asymptotic_constants(N);
  if (r < detail::kSeriesThreshold) {
    return (s_of_r(N, r) - a.c1 * std::exp(a.mu * r) + a.c2 * std::exp(-a.nu * r)) / std::exp(-a.nu * r);
  }
  const double Y = std::exp(-r);
  // s = c1 e^(mu r) F with F = (1 + x)^(-1/(N-2)), x = (N-1) * excess.
  const double x = (N - 1) * detail::tail_series_excess(N, Y);
  const double F_minus_1 = std::expm1(-std::log1p(x) / (N - 2));
  const double g = static_cast<double>(a.c2_over_c1);
  // c1 e^(mu r) (F - 1 + g Y^2) / e^(-nu r), with mu + nu = 2.
  return a.c1 * std::exp(2.0 * r) * (F_minus_1 + g * Y * Y);
}

/// rho e^(2 mu r) (2 c1)^(2N-2) - 1 at r (tends to k1 e^(-2r)).
inline double rho_normalized_excess(int N, double r) {
  if (r < detail::kSeriesThreshold) throw DomainError("rho_normalized_excess: r must be >= 2");
  const double Y = std::exp(-r);
  const double x = (N - 1) * detail::tail_series_excess(N, Y);
  const double log_F = -std::log1p(x) / (N - 2);
  return std::expm1(2.0 * (N - 1) * (std::log1p(-Y * Y) - log_F));
}

/// Least-squares coefficient k in rho_normalized_excess(r) ~ k e^(-2r).
inline double fit_k1(int N, const std::vector<double>& rs) {
  double num = 0.0, den = 0.0;
  for (double r : rs) {
    const double e = std::exp(-2.0 * r);
    num += rho_normalized_excess(N, r) * e;
    den += e * e;
  }
  return num / den;
}

/// Tabulated s(r) on [r_lo, r_hi] with monotone inversion r(s).
class ChangeOfVariable {
 public:
  explicit ChangeOfVariable(int N, double r_lo = 1e-4, double r_hi = 40.0, std::size_t points = 2049)
      : N_(N), constants_(asymptotic_constants(N)) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || points < 2) throw ArgumentError("ChangeOfVariable: bad table range");
    r_.resize(points);
    s_.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      r_[i] = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / static_cast<double>(points - 1));
      s_[i] = s_of_r(N, r_[i]);
    }
    for (std::size_t i = 1; i < points; ++i)
      if (!(s_[i] > s_[i - 1])) throw NumericError("ChangeOfVariable: tabulated s is not increasing");
  }

  int dimension() const noexcept { return N_; }
  const AsymptoticConstants& constants() const noexcept { return constants_; }
  const std::vector<double>& r_table() const noexcept { return r_; }
  const std::vector<double>& s_table() const noexcept { return s_; }
  double s_min() const noexcept { return s_.front(); }
  double s_max() const noexcept { return s_.back(); }

  double s(double r) const { return s_of_r(N_, r); }

  /// dr/ds = (sinh r / s)^(N-1)
  double dr_ds(double r, double s) const { return std::pow(std::sinh(r) / s, N_ - 1); }

  double r(double s) const {
    if (!(s >= s_.front()) || !(s <= s_.back()))
      throw RangeError("r(s): s = " + std::to_string(s) + " outside the tabulated range [" +
                       std::to_string(s_.front()) + ", " + std::to_string(s_.back()) + "]");
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t hi = static_cast<std::size_t>(it - s_.begin());
    if (hi >= s_.size()) return r_.back();
    if (hi == 0) return r_.front();
    const std::size_t lo = hi - 1;
    double a = r_[lo], b = r_[hi];
    // log-log interpolation, then safeguarded Newton.
    const double t = std::log(s / s_[lo]) / std::log(s_[hi] / s_[lo]);
    double x = a * std::pow(b / a, t);
    for (int it2 = 0; it2 < 50; ++it2) {
      const double sx = s_of_r(N_, x);
      const double f = sx - s;
      if (f > 0.0) b = x; else a = x;
      double next = x - f / dr_ds_inverse(x, sx);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - x) <= 1e-15 * x) return next;
      x = next;
    }
    return x;
  }

  /// rho(s) = (sinh r(s) / s)^(2(N-1))
  double rho(double s) const { return rho_at(r(s), s); }
  double rho_at(double r, double s) const { return std::pow(std::sinh(r) / s, 2 * (N_ - 1)); }

 private:
  double dr_ds_inverse(double r, double s) const { return std::pow(s / std::sinh(r), N_ - 1); }

  int N_;
  AsymptoticConstants constants_;
  std::vector<double> r_;
  std::vector<double> s_;
};

/// v(s) = u(r(s)) with derivatives in s.
inline RadialFunction compose_with_r_of_s(const RadialFunction& u, std::shared_ptr<const ChangeOfVariable> cov) {
  if (!u.has_d1() || !u.has_d2()) throw CapabilityError("compose_with_r_of_s needs u' and u''");
  const Support su = u.support();
  const Support ss{cov->s(su.lo), std::isfinite(su.hi) ? cov->s(su.hi) : std::numeric_limits<double>::infinity()};
  const int N = cov->dimension();
  auto jet = [u, cov, N, ss](double s) {
    if (s <= ss.lo || s >= ss.hi) return Jet2{0.0, 0.0, 0.0};
    const double r = cov->r(s);
    const double g = cov->dr_ds(r, s);
    const double g1 = (N - 1) * g * (g / std::tanh(r) - 1.0 / s);
    const double f1 = u.d1(r);
    return Jet2{u.value(r), f1 * g, u.d2(r) * g * g + f1 * g1};
  };
  return from_jet(jet, ss, "s(" + u.id() + ")");
}

/// Radial Rellich inequality in the s variable:
///   int (Delta v)^2 s^(N-1)/rho - ((N-1)^4/16) int rho v^2 s^(N-1)
///     >= (9/16) int rho v^2 s^(N-1)/r^4 + ((N-1)^2/8) int rho v^2 s^(N-1)/r^2.
inline HardyReport check_prop63(const RadialFunction& v, const ChangeOfVariable& cov) {
  const int N = cov.dimension();
  detail::require_rellich_dimension(N, "check_prop63");
  require_compact_support(v, 0.0, std::numeric_limits<double>::infinity());
  const Support sup = v.support();
  if (sup.lo < cov.s_min() || sup.hi > cov.s_max())
    throw RangeError("check_prop63: support leaves the tabulated s range");
  const double q = (N - 1) * (N - 1);
  auto eval = [&](const QuadratureRule& rule) {
    double bil = 0.0, l2 = 0.0, w4 = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double s = rule.nodes[i], w = rule.weights[i];
      const double f = v.value(s), f1 = v.d1(s), f2 = v.d2(s);
      if (f == 0.0 && f1 == 0.0 && f2 == 0.0) continue;
      const double r = cov.r(s);
      const double rho = cov.rho_at(r, s);
      const double vol = std::pow(s, N - 1);
      const double lap = f2 + (N - 1) * f1 / s;
      const double terms[4] = {lap * lap * vol / rho, rho * f * f * vol, rho * f * f * vol / (r * r * r * r),
                               rho * f * f * vol / (r * r)};
      for (double t : terms)
        if (!std::isfinite(t)) throw EvaluationError("check_prop63: non-finite integrand", s);
      bil += w * terms[0];
      l2 += w * terms[1];
      w4 += w * terms[2];
      w2 += w * terms[3];
    }
    return detail::Sides{bil - q * q / 16.0 * l2, 9.0 / 16.0 * w4 + q / 8.0 * w2};
  };
  const auto fine = eval(support_rule(v, 32));
  const auto coarse = eval(support_rule(v, 16));
  HardyReport rep;
  rep.N = N;
  rep.family = "s-variable";
  rep.test_id = v.id();
  rep.lhs = fine.lhs;
  rep.rhs = fine.rhs;
  rep.margin = fine.lhs - fine.rhs;
  rep.quad_error = std::abs(rep.margin - (coarse.lhs - coarse.rhs));
  return rep;
}

inline HardyReport check_prop63(const RadialFunction& v, int N) { return check_prop63(v, ChangeOfVariable(N)); }

}  // namespace hyperhardy
