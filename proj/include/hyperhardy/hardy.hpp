#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/forms.hpp"
#include "hyperhardy/grid.hpp"
#include "hyperhardy/iterated_log.hpp"
#include "hyperhardy/manifold.hpp"
#include "hyperhardy/parallel.hpp"
#include "hyperhardy/pencil.hpp"
#include "hyperhardy/radial_function.hpp"

namespace hyperhardy {

/// One side-by-side evaluation of an inequality lhs >= rhs on a test function.
struct HardyReport {
  int N = 0;
  std::string family;
  std::string test_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  /// |margin(32 panels) - margin(16 panels)| on the support rule.
  double quad_error = 0.0;

  double tolerance(double scale = 1.0) const { return scale * 1e-8 * std::abs(lhs); }
  bool passes(double scale = 1.0) const { return margin >= -tolerance(scale); }
};

namespace detail {

struct Sides {
  double lhs;
  double rhs;
};

template <class Eval>
HardyReport two_level_report(const RadialFunction& u, const ModelManifold& M, Eval&& eval) {
  const Sides fine = eval(support_rule(u, 32));
  const Sides coarse = eval(support_rule(u, 16));
  HardyReport rep;
  rep.N = M.dimension();
  rep.family = M.name();
  rep.test_id = u.id();
  rep.lhs = fine.lhs;
  rep.rhs = fine.rhs;
  rep.margin = fine.lhs - fine.rhs;
  rep.quad_error = std::abs(rep.margin - (coarse.lhs - coarse.rhs));
  return rep;
}

inline double one(double) { return 1.0; }
inline double inv_r2(double r) { return 1.0 / (r * r); }

}  // namespace detail

/// Poincare-Hardy inequality on hyperbolic space:
///   int |u'|^2 - ((N-1)^2/4) int u^2 >= (1/4) int u^2/r^2 + ((N-1)(N-3)/4) int u^2/sinh^2 r
/// with all integrals against sinh^(N-1) r dr.
inline HardyReport check_poincare_hardy(const RadialFunction& u, int N) {
  const auto H = ModelManifold::hyperbolic(N);
  require_compact_support(u, 0.0, std::numeric_limits<double>::infinity());
  const double lam = 0.25 * (N - 1) * (N - 1);
  const double c = 0.25 * (N - 1) * (N - 3);
  return detail::two_level_report(u, H, [&](const QuadratureRule& rule) {
    const double D = dirichlet_form(u, H, rule);
    const double L2 = weighted_l2(u, detail::one, H, rule);
    const double hardy = weighted_l2(u, detail::inv_r2, H, rule);
    const double sinh_term = c == 0.0 ? 0.0 : weighted_l2(u, [&](double r) { return H.inverse_square(r); }, H, rule);
    return detail::Sides{D - lam * L2, 0.25 * hardy + c * sinh_term};
  });
}

/// The same inequality on a general model, with the curvature weight
/// ((N-1)/4)[2 psi''/psi + (N-3)(psi'^2-1)/psi^2] in place of (N-1)^2/4.
inline HardyReport check_general_model(const RadialFunction& u, const ModelManifold& M) {
  require_compact_support(u, 0.0, std::numeric_limits<double>::infinity());
  const int N = M.dimension();
  const double c = 0.25 * (N - 1) * (N - 3);
  return detail::two_level_report(u, M, [&](const QuadratureRule& rule) {
    const double D = dirichlet_form(u, M, rule);
    const double curv = weighted_l2(u, [&](double r) { return hardy_weight_general(M, r); }, M, rule);
    const double hardy = weighted_l2(u, detail::inv_r2, M, rule);
    const double psi_term = c == 0.0 ? 0.0 : weighted_l2(u, [&](double r) { return M.inverse_square(r); }, M, rule);
    return detail::Sides{D - curv, 0.25 * hardy + c * psi_term};
  });
}

/// Bottom of  [int |u'|^2 - lambda int u^2] / int u^2/r^2  over radial u on [r_min, r_max].
inline ConstantEstimate hardy_quotient_bottom(int N, double lambda, double r_min, double r_max, std::size_t M_grid,
                                              Grading grading = Grading::geometric, const EigenOptions& opt = {}) {
  const auto H = ModelManifold::hyperbolic(N);
  auto P = assemble_pencil(H, [lambda](double) { return lambda; }, detail::inv_r2,
                           make_grid(r_min, r_max, M_grid, grading), PencilOrder::second);
  auto est = min_generalized_eigenvalue(P, opt);
  if (!(est.value > 0.0)) {
    throw TruncationError("Hardy pencil is indefinite on [" + std::to_string(r_min) + ", " +
                          std::to_string(r_max) + "]: truncation too small");
  }
  return est;
}

/// Discrete estimate of the best constant in front of int u^2/r^2 once the
/// spectral gap (N-1)^2/4 has been subtracted. Tends to 1/4 from above.
inline ConstantEstimate estimate_sharp_hardy(int N, double r_min, double r_max, std::size_t M_grid,
                                             Grading grading = Grading::geometric, const EigenOptions& opt = {}) {
  if (N < 3) throw DomainError("estimate_sharp_hardy: N must be >= 3");
  return hardy_quotient_bottom(N, 0.25 * (N - 1) * (N - 1), r_min, r_max, M_grid, grading, opt);
}

/// Bottom of int |u'|^2 / int u^2 over radial u; tends to (N-1)^2/4 on hyperbolic space.
inline ConstantEstimate estimate_poincare_gap(int N, double r_min, double r_max, std::size_t M_grid,
                                              Grading grading = Grading::uniform, const EigenOptions& opt = {}) {
  if (N < 2) throw DomainError("estimate_poincare_gap: N must be >= 2");
  auto P = assemble_pencil(ModelManifold::hyperbolic(N), [](double) { return 0.0; }, detail::one,
                           make_grid(r_min, r_max, M_grid, grading), PencilOrder::second);
  return min_generalized_eigenvalue(P, opt);
}

/// h(lambda) sampled on a lambda grid, with the truncation it was computed on.
struct LambdaCurve {
  int N = 0;
  std::vector<double> lambdas;
  std::vector<double> h_values;
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t M = 0;
  Grading grading = Grading::geometric;

  bool nonincreasing(double tol = 0.0) const {
    for (std::size_t i = 1; i < h_values.size(); ++i)
      if (h_values[i] > h_values[i - 1] + tol) return false;
    return true;
  }

  /// max over interior points of (h[i-1] + h[i+1])/2 - h[i]; <= 0 for a concave curve
  /// on a uniform lambda grid.
  double concavity_defect() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < h_values.size(); ++i)
      worst = std::max(worst, 0.5 * (h_values[i - 1] + h_values[i + 1]) - h_values[i]);
    return worst;
  }
};

inline std::vector<double> default_lambda_grid(int N, std::size_t points = 17) {
  if (points < 2) throw ArgumentError("lambda grid needs at least two points");
  const double top = 0.25 * (N - 1) * (N - 1);
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) out[i] = top * static_cast<double>(i) / static_cast<double>(points - 1);
  return out;
}

/// h(lambda) = bottom of [int |u'|^2 - lambda int u^2] / int u^2/r^2 for each lambda.
inline LambdaCurve sweep_h_lambda(int N, const std::vector<double>& lambdas, double r_min, double r_max,
                                  std::size_t M_grid, Grading grading = Grading::geometric) {
  if (N < 3) throw DomainError("sweep_h_lambda: N must be >= 3");
  const double top = 0.25 * (N - 1) * (N - 1);
  for (double l : lambdas)
    if (!(l >= 0.0) || l > top) throw DomainError("sweep_h_lambda: lambda must lie in [0, (N-1)^2/4]");
  LambdaCurve curve;
  curve.N = N;
  curve.lambdas = lambdas;
  curve.r_min = r_min;
  curve.r_max = r_max;
  curve.M = M_grid;
  curve.grading = grading;
  EigenOptions opt;
  opt.refinements = 1;
  curve.h_values = parallel_map(lambdas.size(), [&](std::size_t i) {
    return hardy_quotient_bottom(N, lambdas[i], r_min, r_max, M_grid, grading, opt).value;
  });
  return curve;
}

/// Poincare-Hardy inequality on the unit ball improved by the first k
/// iterated-log terms (1/4) int u^2/r^2 (X_1 ... X_i)^2.
inline HardyReport check_prop26(const RadialFunction& u, int N, int k) {
  if (k < 0) throw DomainError("check_prop26: k must be >= 0");
  const auto H = ModelManifold::hyperbolic(N);
  require_compact_support(u, 0.0, 1.0);
  const double lam = 0.25 * (N - 1) * (N - 1);
  const double c = 0.25 * (N - 1) * (N - 3);
  return detail::two_level_report(u, H, [&](const QuadratureRule& rule) {
    const double D = dirichlet_form(u, H, rule);
    const double L2 = weighted_l2(u, detail::one, H, rule);
    const double hardy = weighted_l2(u, detail::inv_r2, H, rule);
    const double sinh_term = c == 0.0 ? 0.0 : weighted_l2(u, [&](double r) { return H.inverse_square(r); }, H, rule);
    double series = 0.0;
    if (k > 0) {
      series = weighted_l2(
          u,
          [&](double r) {
            const auto logs = iterated_logs(k, r);
            double s = 0.0;
            for (double p : logs.P) s += p * p;
            return s / (r * r);
          },
          H, rule);
    }
    return detail::Sides{D - lam * L2, 0.25 * hardy + c * sinh_term + 0.25 * series};
  });
}

/// Cutoff equal to 1 on [0, delta], 0 from 2 delta on, quintic smoothstep in between.
inline Jet2 cutoff_jet(double delta, double r) {
  const Jet2 s = smoothstep((r - delta) / delta);
  return {1.0 - s.f, -s.d1 / delta, -s.d2 / (delta * delta)};
}

/// U(r) = r^eps X_1(r)^a_1 ... X_k(r)^a_k times the cutoff between delta and 2 delta.
inline double trial_U(double eps, const std::vector<double>& a, double delta, double r) {
  if (!(delta > 0.0) || !(delta < 0.5)) throw DomainError("trial_U: delta must lie in (0, 1/2)");
  if (!(r > 0.0)) throw DomainError("trial_U: r must be positive");
  if (r >= 2.0 * delta) return 0.0;
  double v = std::pow(r, eps) * cutoff_jet(delta, r).f;
  if (!a.empty()) {
    const auto logs = iterated_logs(static_cast<int>(a.size()), r);
    for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(logs.X[i], a[i]);
  }
  return v;
}

/// Parameters (eps, a_1..a_k) of one trial function in the optimality scan.
struct TrialParams {
  double eps;
  std::vector<double> a;
};

/// eps = a_i = start / 2^j for j = 0..steps-1.
inline std::vector<TrialParams> halving_sequence(int k, double start, int steps) {
  std::vector<TrialParams> out;
  double p = start;
  for (int j = 0; j < steps; ++j, p *= 0.5) out.push_back({p, std::vector<double>(static_cast<std::size_t>(k), p)});
  return out;
}

namespace detail {

// X_1..X_k and their partial products at r = e^{-s}, computed without forming r.
inline IteratedLogs iterated_logs_in_s(int k, double s) {
  IteratedLogs out;
  double x = 1.0 / (1.0 + s), p = 1.0;
  for (int i = 0; i < k; ++i) {
    if (i > 0) x = 1.0 / (1.0 - std::log(x));
    p *= x;
    out.X.push_back(x);
    out.P.push_back(p);
  }
  return out;
}

}  // namespace detail

/// Quotient I_{k-1}(u) / int u^2/r^2 (X_1...X_k)^2 for u = Phi_k U, where Phi_k is
/// the iterated-log ground state. With u = Phi_k v the quotient equals
///   1/4 + int Phi_k^2 |v'|^2 / int Phi_k^2 v^2 (X_1...X_k)^2 / r^2,
/// and Phi_k^2 sinh^(N-1) r = r / (X_1...X_k). Both integrals are evaluated in s = -log r.
inline double prop26_quotient(int N, int k, const TrialParams& p, double delta = 0.25,
                              double max_window = 1e6) {
  if (N < 3) throw DomainError("prop26_quotient: N must be >= 3");
  if (k < 1) throw DomainError("prop26_quotient: k must be >= 1");
  if (p.a.size() != static_cast<std::size_t>(k)) throw ArgumentError("prop26_quotient: need k exponents");
  if (!(p.eps > 0.0)) throw ArgumentError("prop26_quotient: eps must be positive");
  if (!(delta > 0.0) || !(delta < 0.5)) throw DomainError("prop26_quotient: delta must lie in (0, 1/2)");

  const double s_lo = -std::log(2.0 * delta);
  const double s_c = -std::log(delta);
  // Beyond s_c the integrands carry exp(-2 eps s); 40 e-folds past s_c is negligible.
  const double s_hi = s_c + 1.0 + 40.0 / p.eps;
  if (s_hi - s_lo > max_window)
    throw RefinementRequest("prop26_quotient: s-window " + std::to_string(s_hi - s_lo) +
                            " exceeds the quadrature budget; refine or increase eps");

  auto terms = [&](double s) {
    const double r = std::exp(-s);
    const auto logs = detail::iterated_logs_in_s(k, s);
    double log_v = -p.eps * s, dlog_v = -p.eps;
    for (int i = 0; i < k; ++i) {
      log_v += p.a[static_cast<std::size_t>(i)] * std::log(logs.X[static_cast<std::size_t>(i)]);
      dlog_v -= p.a[static_cast<std::size_t>(i)] * logs.P[static_cast<std::size_t>(i)];
    }
    const double v0 = std::exp(log_v);
    const Jet2 cut = s < s_c ? cutoff_jet(delta, r) : Jet2{1.0, 0.0, 0.0};
    const double v = v0 * cut.f;
    const double dv = v0 * (dlog_v * cut.f - r * cut.d1);
    const double Pk = logs.P.back();
    return std::pair{dv * dv / Pk, v * v * Pk};
  };
  const QuadratureRule rule_a = gauss_rule({s_lo, s_c}, 16);
  const QuadratureRule rule_b = gauss_rule({s_c, s_hi}, 400, true);
  double num = 0.0, den = 0.0;
  for (const auto* rule : {&rule_a, &rule_b}) {
    for (std::size_t i = 0; i < rule->size(); ++i) {
      const auto [n, d] = terms(rule->nodes[i]);
      if (!std::isfinite(n) || !std::isfinite(d)) throw EvaluationError("prop26_quotient: non-finite integrand", rule->nodes[i]);
      num += rule->weights[i] * n;
      den += rule->weights[i] * d;
    }
  }
  if (!(den > 0.0)) throw NumericError("prop26_quotient: vanishing denominator");
  return 0.25 + num / den;
}

/// Optimality scan: one quotient per parameter set, evaluated in parallel.
inline std::vector<double> prop26_optimality_scan(int N, int k, const std::vector<TrialParams>& params,
                                                  double delta = 0.25) {
  return parallel_map(params.size(), [&](std::size_t i) { return prop26_quotient(N, k, params[i], delta); });
}

}  // namespace hyperhardy
