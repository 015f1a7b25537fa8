#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperhardy/config.hpp"
#include "hyperhardy/euclid.hpp"
#include "hyperhardy/hardy.hpp"
#include "hyperhardy/manifest.hpp"
#include "hyperhardy/parallel.hpp"
#include "hyperhardy/rellich.hpp"
#include "hyperhardy/supersolution.hpp"

namespace hyperhardy {

/// Effective configuration of a suite run: defaults overlaid by user keys.
struct SuiteContext {
  Config config = default_config();
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::size_t workers = 0;

  static SuiteContext from(const Config& overrides) {
    SuiteContext ctx;
    for (const auto& [k, v] : overrides.entries())
      if (!ctx.config.has(k)) throw ConfigError("unknown key '" + k + "'", overrides.line_of(k));
    ctx.config.merge(overrides);
    ctx.seed = ctx.config.get_u64("run.seed", 0);
    ctx.tol_scale = ctx.config.get_double("run.tol_scale", 1.0);
    if (!(ctx.tol_scale > 0.0)) throw ConfigError("'run.tol_scale' must be positive", 0);
    ctx.workers = static_cast<std::size_t>(ctx.config.get_int("run.workers", 0));
    return ctx;
  }

  /// tolerances.<key> times the global scale.
  double tol(const std::string& key) const {
    const std::string full = "tolerances." + key;
    if (!config.has(full)) throw ConfigError("missing tolerance '" + full + "'", 0);
    return tol_scale * config.get_double(full, 0.0);
  }

  int get_int(const std::string& key) const { return config.get_int(key, 0); }
  double get_double(const std::string& key) const { return config.get_double(key, 0.0); }

  /// Per-check generator seed, stable across platforms.
  std::uint64_t seed_for(const std::string& name) const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ull;
    return seed ^ h;
  }
};

struct Check {
  std::string name;
  std::function<std::vector<CheckResult>(const SuiteContext&)> run;
};

/// Runs the checks on worker threads. A check that throws yields one failed
/// row carrying the message. Rows come back sorted by name.
inline std::vector<CheckResult> run_checks(const std::vector<Check>& checks, const SuiteContext& ctx) {
  auto parts = parallel_map(
      checks.size(),
      [&](std::size_t i) -> std::vector<CheckResult> {
        try {
          return checks[i].run(ctx);
        } catch (const std::exception& e) {
          CheckResult r;
          r.name = checks[i].name;
          r.value = std::numeric_limits<double>::quiet_NaN();
          r.detail = std::string("error: ") + e.what();
          return {r};
        }
      },
      ctx.workers);
  std::vector<CheckResult> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
  sort_by_name(rows);
  return rows;
}

namespace detail {

inline std::string fmt(double x) { return format_number(x); }

template <class... Ts>
std::string describe(const Ts&... parts) {
  std::ostringstream out;
  ((out << parts), ...);
  return out.str();
}

inline std::vector<ModelManifold> builtin_models(int N, const std::vector<double>& superexp_a) {
  std::vector<ModelManifold> out{ModelManifold::euclidean(N), ModelManifold::hyperbolic(N)};
  for (double a : superexp_a) out.push_back(ModelManifold::superexp(N, a));
  return out;
}

inline std::string model_label(const ModelManifold& M) {
  return M.family() == Family::superexp ? M.name() + "(a=" + fmt(M.exponent()) + ")" : M.name();
}

// Worst margin / |lhs| over seeded test functions; passes when >= -tol.
template <class Sampler, class Eval>
CheckResult worst_margin(const std::string& name, int N, std::size_t count, std::uint64_t seed, const Sampler& sample,
                         Eval&& eval, double tol) {
  std::mt19937_64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_id;
  for (std::size_t i = 0; i < count; ++i) {
    const auto f = sample(rng);
    const HardyReport rep = eval(f);
    const double rel = rep.lhs != 0.0 ? rep.margin / std::abs(rep.lhs) : rep.margin;
    if (rel < worst) {
      worst = rel;
      worst_id = rep.test_id;
    }
  }
  return check_at_least(name, N, worst, -tol, describe(count, " functions; worst ", worst_id));
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

inline bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// identities

inline std::vector<Check> identity_checks(const SuiteContext& ctx) {
  std::vector<Check> out;
  const auto dims = ctx.config.get_doubles("identities.dimensions", {3, 4, 5, 7, 10});
  for (double dN : dims) {
    const int N = static_cast<int>(dN);
    out.push_back({"power_warp_identity", [N](const SuiteContext& c) {
                     const auto models = detail::builtin_models(N, c.config.get_doubles("identities.superexp_a", {2.0}));
                     double worst = 0.0;
                     std::string where;
                     for (const auto& M : models)
                       for (double a : {-2.0, -0.5, 1.0, 0.5 * (N - 1)})
                         for (double r : identity_sample_points()) {
                           const double rel = lemma42_residual(M, a, r).relative;
                           if (rel > worst || !(rel == rel)) {
                             worst = rel;
                             where = detail::describe(detail::model_label(M), " alpha=", a, " r=", r);
                           }
                         }
                     return std::vector{check_at_most("power_warp_identity", N, worst, c.tol("identity_rel"), where)};
                   }});
    out.push_back({"multiplier_identity", [N](const SuiteContext& c) {
                     const auto models = detail::builtin_models(N, c.config.get_doubles("identities.superexp_a", {2.0}));
                     std::vector<RadialFunction> fs{power_profile(N), log_profile(N)};
                     for (int k = 1; k <= 3; ++k) fs.push_back(iterated_log_profile(N, k));
                     double worst = 0.0;
                     std::string where;
                     for (const auto& M : models)
                       for (std::size_t j = 0; j < fs.size(); ++j)
                         for (double r : identity_sample_points()) {
                           if (j >= 2 && r > 1.0) continue;
                           const double rel = prop43_residual(M, fs[j], r).relative;
                           if (rel > worst || !(rel == rel)) {
                             worst = rel;
                             where = detail::describe(detail::model_label(M), " f=", fs[j].id(), " r=", r);
                           }
                         }
                     return std::vector{check_at_most("multiplier_identity", N, worst, c.tol("identity_rel"), where)};
                   }});
    out.push_back({"model_equality", [N](const SuiteContext& c) {
                     const auto models = detail::builtin_models(N, c.config.get_doubles("identities.superexp_a", {2.0}));
                     double worst = 0.0;
                     std::string where;
                     for (const auto& M : models)
                       for (double r : identity_sample_points()) {
                         const double rel = theorem25_residual(M, r).relative;
                         if (rel > worst || !(rel == rel)) {
                           worst = rel;
                           where = detail::describe(detail::model_label(M), " r=", r);
                         }
                       }
                     return std::vector{check_at_most("model_equality", N, worst, c.tol("identity_rel"), where)};
                   }});
  }
  out.push_back({"integer_identity", [](const SuiteContext& c) {
                   const int top = c.get_int("identities.integer_identity_max_N");
                   int bad = 0;
                   for (int N = 5; N <= top; ++N)
                     if (!verify_remark31_identity(N).holds) ++bad;
                   return std::vector{
                       check_at_most("integer_identity", 0, bad, 0.0, detail::describe("N = 5..", top, "; failures"))};
                 }});
  out.push_back({"coefficient_minima", [](const SuiteContext& c) {
                   const auto range = c.config.get_doubles("identities.coeff_min_N", {5, 12});
                   if (range.size() != 2) throw ConfigError("'identities.coeff_min_N' needs two values", 0);
                   const int n_max = c.get_int("identities.coeff_n_max");
                   int bad = 0;
                   for (int N = static_cast<int>(range[0]); N <= static_cast<int>(range[1]); ++N) {
                     const auto a = min_coeff_A(N, n_max);
                     const auto b = min_coeff_B(N, n_max);
                     if (a.value != min_A_closed_form(N) || b.value != min_B_closed_form(N)) ++bad;
                   }
                   const auto a5 = min_coeff_A(5, n_max).value;
                   const auto b5 = min_coeff_B(5, n_max).value;
                   return std::vector{
                       check_at_most("coefficient_minima", 0, bad, 0.0,
                                     detail::describe("exact mismatches over N = ", range[0], "..", range[1], "; N=5 A=",
                                                      a5.str(), " B=", b5.str())),
                       check_flag("coefficient_minima_at_5", 5, a5 == 1 && b5 == 12, true,
                                  detail::describe("A=", a5.str(), " B=", b5.str()))};
                 }});
  out.push_back({"asymptotic_consistency", [](const SuiteContext& c) {
                   const int top = c.get_int("asymptotics.consistency_max_N");
                   int bad = 0;
                   for (int N = 5; N <= top; ++N)
                     if (!asymptotic_constants(N).consistent) ++bad;
                   return std::vector{check_at_most("asymptotic_consistency", 0, bad, 0.0,
                                                    detail::describe("k1 - 2 c2/c1 == -4(N-1)/(N+1) for N = 5..", top))};
                 }});
  out.push_back({"ground_state_equation", [](const SuiteContext& c) {
                   double worst = 0.0;
                   for (int N : {3, 4, 5, 7, 10})
                     for (double r : identity_sample_points()) worst = std::max(worst, ground_state_residual(N, r).relative);
                   return std::vector{check_at_most("ground_state_equation", 0, worst, c.tol("identity_rel"))};
                 }});
  return out;
}

// ---------------------------------------------------------------------------
// hardy

inline Check hardy_sharp_check(int N, double r_min, double r_max, std::size_t M) {
  return {"hardy_sharp", [=](const SuiteContext& c) {
            const double lo = c.get_double("hardy.sharp_low"), hi = c.get_double("hardy.sharp_high");
            const auto est = estimate_sharp_hardy(N, r_min, r_max, M);
            return std::vector{check_within("hardy_sharp", N, est.value, 0.5 * (lo + hi), 0.5 * (hi - lo),
                                            detail::describe("r_min=", r_min, " r_max=", r_max, " M=", M))};
          }};
}

/// Sharp Hardy estimates over increasing r_max; each in range and the sequence nonincreasing.
inline Check hardy_sharp_trend_check(int N, double r_min, std::vector<double> r_maxes, std::size_t M) {
  return {"hardy_sharp_trend", [=](const SuiteContext& c) {
            const double lo = c.get_double("hardy.sharp_low"), hi = c.get_double("hardy.sharp_high");
            std::vector<double> vals;
            std::vector<CheckResult> rows;
            for (double rm : r_maxes) {
              vals.push_back(estimate_sharp_hardy(N, r_min, rm, M).value);
              rows.push_back(check_within("hardy_sharp.r_max=" + detail::fmt(rm), N, vals.back(), 0.5 * (lo + hi),
                                          0.5 * (hi - lo), detail::describe("r_min=", r_min, " M=", M)));
            }
            rows.push_back(check_flag("hardy_sharp.nonincreasing", N, detail::nonincreasing(vals), true, detail::join(vals)));
            return rows;
          }};
}

inline Check poincare_gap_check(int N, double r_min, double r_max, std::size_t M) {
  return {"poincare_gap", [=](const SuiteContext& c) {
            const double target = 0.25 * (N - 1) * (N - 1);
            const auto est = estimate_poincare_gap(N, r_min, r_max, M);
            return std::vector{check_within("poincare_gap", N, est.value, target, c.tol("poincare_gap_rel") * target,
                                            detail::describe("r_min=", r_min, " r_max=", r_max, " M=", M))};
          }};
}

inline Check lambda_curve_check(int N, double r_min, double r_max, std::size_t M, std::size_t points) {
  return {"h_lambda", [=](const SuiteContext&) {
            const auto curve = sweep_h_lambda(N, default_lambda_grid(N, points), r_min, r_max, M);
            const double h0 = curve.h_values.front(), h_top = curve.h_values.back();
            const double e0 = 0.25 * (N - 2) * (N - 2);
            const std::string trunc = detail::describe("r_min=", r_min, " r_max=", r_max, " M=", M);
            return std::vector{check_within("h_lambda.at_zero", N, h0, e0, 0.02 * e0, trunc),
                               check_within("h_lambda.at_top", N, h_top, 0.25, 0.02 * 0.25, trunc),
                               check_flag("h_lambda.nonincreasing", N, curve.nonincreasing(), true, detail::join(curve.h_values)),
                               check_at_most("h_lambda.concavity_defect", N, curve.concavity_defect(), 1e-6)};
          }};
}

inline std::vector<Check> hardy_margin_checks() {
  std::vector<Check> out;
  out.push_back({"poincare_hardy_margin", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   const BumpSampler sample{0.01, 20.0};
                   for (int N : {3, 5, 7})
                     rows.push_back(detail::worst_margin(
                         "poincare_hardy_margin", N, c.get_int("hardy.bumps"), c.seed_for("poincare_hardy_margin") + N,
                         sample, [N](const RadialFunction& u) { return check_poincare_hardy(u, N); }, c.tol("margin_rel")));
                   return rows;
                 }});
  out.push_back({"general_model_margin", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   const BumpSampler sample{0.01, 6.0};
                   for (const auto& M : {ModelManifold::euclidean(5), ModelManifold::hyperbolic(5),
                                         ModelManifold::superexp(5, 2.0)}) {
                     const std::string name = "general_model_margin." + M.name();
                     rows.push_back(detail::worst_margin(
                         name, 5, c.get_int("hardy.bumps"), c.seed_for(name), sample,
                         [&M](const RadialFunction& u) { return check_general_model(u, M); }, c.tol("margin_rel")));
                   }
                   return rows;
                 }});
  out.push_back({"ball_log_hardy_margin", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   const BumpSampler sample{0.005, 0.995};
                   for (int k = 1; k <= 3; ++k) {
                     const std::string name = "ball_log_hardy_margin.k=" + std::to_string(k);
                     rows.push_back(detail::worst_margin(
                         name, 5, c.get_int("hardy.bumps"), c.seed_for(name), sample,
                         [k](const RadialFunction& u) { return check_prop26(u, 5, k); }, c.tol("margin_rel")));
                   }
                   return rows;
                 }});
  return out;
}

inline std::vector<Check> criticality_checks() {
  std::vector<Check> out;
  out.push_back({"null_criticality_slope", [](const SuiteContext& c) {
                   const double slope = fit_slope(null_criticality_scan(5, {2, 4, 8, 16}));
                   return std::vector{check_within("null_criticality_slope", 5, slope, 0.25, c.tol("slope_abs"))};
                 }});
  out.push_back({"minimal_growth", [](const SuiteContext&) {
                   std::vector<double> at0, atinf;
                   for (double rs : {1e-3, 1e-6, 1e-9}) at0.push_back(minimal_growth_ratios(5, rs, 10.0).at_zero);
                   for (double rl : {10.0, 100.0, 1000.0}) atinf.push_back(minimal_growth_ratios(5, 0.5, rl).at_infinity);
                   return std::vector{
                       check_flag("minimal_growth.at_zero_decreasing", 5, detail::strictly_decreasing(at0), true,
                                  detail::join(at0)),
                       check_flag("minimal_growth.at_infinity_decreasing", 5, detail::strictly_decreasing(atinf), true,
                                  detail::join(atinf))};
                 }});
  out.push_back({"optimality_scan", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   for (int k : {1, 2}) {
                     const auto q = prop26_optimality_scan(5, k, halving_sequence(k, 0.5, 5));
                     const std::string base = "optimality_scan.k=" + std::to_string(k);
                     rows.push_back(check_at_least(base + ".floor", 5, *std::min_element(q.begin(), q.end()),
                                                   0.25 - c.tol("optimality_floor_abs"), detail::join(q)));
                     rows.push_back(check_flag(base + ".nonincreasing", 5, detail::nonincreasing(q), true, detail::join(q)));
                   }
                   return rows;
                 }});
  return out;
}

inline std::vector<Check> hardy_checks(const SuiteContext& ctx) {
  const int N = ctx.get_int("hardy.N");
  std::vector<Check> out{hardy_sharp_check(N, ctx.get_double("hardy.r_min"), ctx.get_double("hardy.r_max"),
                                           static_cast<std::size_t>(ctx.get_int("hardy.M"))),
                         poincare_gap_check(N, 1e-3, 60.0, 8192)};
  for (auto& c : hardy_margin_checks()) out.push_back(std::move(c));
  for (auto& c : criticality_checks()) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// rellich

inline Check euclidean_rellich_check(int N) {
  return {"euclidean_rellich", [N](const SuiteContext& c) {
            const double target = N * N * (N - 4.0) * (N - 4.0) / 16.0;
            const auto est = estimate_euclidean_rellich(N);
            return std::vector{check_within("euclidean_rellich", N, est.value, target, c.get_double("rellich.euclidean_tol"),
                                            "r in [1e-10, 1e10], M=8192")};
          }};
}

inline Check rellich_r2_check(int N, double r_min, std::vector<double> r_maxes, std::size_t M) {
  return {"rellich_r2_sharp", [=](const SuiteContext& c) {
            std::vector<double> vals;
            std::vector<CheckResult> rows;
            const double floor = c.get_double("rellich.r2_floor");
            for (double rm : r_maxes) {
              vals.push_back(estimate_sharp_rellich_r2(N, r_min, rm, M).value);
              rows.push_back(check_at_least("rellich_r2_sharp.r_max=" + detail::fmt(rm), N, vals.back(), floor,
                                            detail::describe("r_min=", r_min, " M=", M)));
            }
            if (vals.size() > 1)
              rows.push_back(check_flag("rellich_r2_sharp.nonincreasing", N, detail::nonincreasing(vals), true,
                                        detail::join(vals)));
            return rows;
          }};
}

inline Check one_dimensional_rellich_check() {
  return {"one_dimensional_rellich", [](const SuiteContext& c) {
            const auto est = one_dimensional_rellich(1e-14, 1e14, 8192);
            return std::vector{check_within("one_dimensional_rellich", 1, est.value, c.get_double("rellich.one_dim_target"),
                                            c.get_double("rellich.one_dim_tol"), "x in [1e-14, 1e14], M=8192")};
          }};
}

inline std::vector<Check> rellich_margin_checks() {
  std::vector<Check> out;
  out.push_back({"poincare_rellich_margin", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   const BumpSampler sample{0.01, 12.0};
                   for (int N : {5, 8})
                     rows.push_back(detail::worst_margin(
                         "poincare_rellich_margin", N, c.get_int("rellich.bumps"), c.seed_for("poincare_rellich_margin") + N,
                         sample, [N](const RadialFunction& u) { return check_theorem31(u, N); }, c.tol("margin_rel")));
                   return rows;
                 }});
  out.push_back({"sinh_hardy_margin", [](const SuiteContext& c) {
                   const BumpSampler sample{0.01, 10.0};
                   return std::vector{detail::worst_margin(
                       "sinh_hardy_margin", 1, c.get_int("rellich.bumps"), c.seed_for("sinh_hardy_margin"), sample,
                       [](const RadialFunction& u) { return check_lemma61(u); }, c.tol("margin_rel"))};
                 }});
  out.push_back({"s_variable_rellich_margin", [](const SuiteContext& c) {
                   const int N = 6;
                   const ChangeOfVariable cov(N);
                   const BumpSampler sample{1e-3, 1e6};
                   return std::vector{detail::worst_margin(
                       "s_variable_rellich_margin", N, c.get_int("rellich.bumps"), c.seed_for("s_variable_rellich_margin"),
                       sample, [&cov](const RadialFunction& v) { return check_prop63(v, cov); }, c.tol("margin_rel"))};
                 }});
  return out;
}

inline Check reduced_form_check(std::size_t count) {
  return {"reduced_form_agreement", [count](const SuiteContext& c) {
            const int N = 5;
            const auto H = ModelManifold::hyperbolic(N);
            const BumpSampler sample{0.01, 10.0};
            std::mt19937_64 rng(c.seed_for("reduced_form_agreement"));
            double worst = 0.0;
            std::string where;
            for (std::size_t i = 0; i < count; ++i) {
              const auto u = sample(rng);
              const double bil = bilaplacian_form(u, H, support_rule(u));
              const double red = radial_reduced_form(liouville_transform(u, N), N, 0);
              const double rel = std::abs(red - bil) / std::abs(bil);
              if (rel > worst) {
                worst = rel;
                where = u.id();
              }
            }
            return std::vector{check_at_most("reduced_form_agreement", N, worst, c.tol("reduced_form_rel"),
                                             detail::describe(count, " functions; worst ", where))};
          }};
}

inline std::vector<Check> rellich_checks(const SuiteContext& ctx) {
  const int N = ctx.get_int("rellich.N");
  std::vector<Check> out{
      euclidean_rellich_check(N),
      rellich_r2_check(N, ctx.get_double("rellich.r_min"), {ctx.get_double("rellich.r_max")},
                       static_cast<std::size_t>(ctx.get_int("rellich.M"))),
      one_dimensional_rellich_check(), reduced_form_check(20)};
  for (auto& c : rellich_margin_checks()) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// euclid

inline Check ball_identity_checks(std::size_t count) {
  return {"ball_identity", [count](const SuiteContext& c) {
            std::vector<CheckResult> rows;
            const BumpSampler sample{0.05, 6.0};
            for (int N : {3, 5, 7})
              for (auto w : {BallIdentity::gradient, BallIdentity::mass, BallIdentity::hardy_weight}) {
                const std::string name = std::string("ball_identity.") + to_string(w);
                std::mt19937_64 rng(c.seed_for(name) + N);
                double worst = 0.0;
                for (std::size_t i = 0; i < count; ++i) worst = std::max(worst, ball_identity_check(sample(rng), N, w).discrepancy);
                rows.push_back(check_at_most(name, N, worst, c.tol("ball_identity_rel"), detail::describe(count, " functions")));
              }
            return rows;
          }};
}

inline Check halfspace_identity_checks() {
  return {"halfspace_identity", [](const SuiteContext& c) {
            std::vector<CheckResult> rows;
            const std::vector<RadialFunction> Us{smooth_bump(0.4, 1.4), smooth_bump(0.5, 1.5), smooth_bump(0.3, 1.9)};
            for (int N : {3, 5}) {
              double worst = 0.0;
              for (const auto& U : Us) worst = std::max(worst, halfspace_gradient_identity(U, N).discrepancy);
              rows.push_back(check_at_most("halfspace_gradient_identity", N, worst, c.tol("halfspace_identity_rel")));
            }
            for (int N : {5, 6, 8})
              for (auto w : {HalfSpaceRellich::y2_weight, HalfSpaceRellich::y4_weight}) {
                double worst = 0.0;
                for (const auto& U : Us) worst = std::max(worst, halfspace_bilaplacian_identity(U, N, w).discrepancy);
                rows.push_back(check_at_most(std::string("halfspace_bilaplacian_identity.") + to_string(w), N, worst,
                                             c.tol("halfspace_identity_rel")));
              }
            return rows;
          }};
}

inline std::vector<Check> euclid_margin_checks() {
  std::vector<Check> out;
  out.push_back({"ball_hardy_margin", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   const BumpSampler sample{0.01, 0.99};
                   for (int N : {3, 5})
                     rows.push_back(detail::worst_margin(
                         "ball_hardy_margin", N, c.get_int("euclid.bumps"), c.seed_for("ball_hardy_margin") + N, sample,
                         [N](const RadialFunction& v) { return check_corollary22(v, N); }, c.tol("margin_rel")));
                   return rows;
                 }});
  out.push_back({"hardy_mazya_margin", [](const SuiteContext& c) {
                   std::vector<CheckResult> rows;
                   const HalfSpaceBumpSampler sample;
                   for (int N : {3, 5})
                     rows.push_back(detail::worst_margin(
                         "hardy_mazya_margin", N, c.get_int("euclid.bumps"), c.seed_for("hardy_mazya_margin") + N, sample,
                         [N](const HalfSpaceFunction& v) { return check_corollary23(v, N); }, c.tol("margin_rel")));
                   return rows;
                 }});
  for (auto w : {HalfSpaceRellich::y2_weight, HalfSpaceRellich::y4_weight}) {
    const std::string name = std::string("halfspace_rellich_margin.") + to_string(w);
    out.push_back({name, [w, name](const SuiteContext& c) {
                     const HalfSpaceBumpSampler sample;
                     const int N = c.get_int("euclid.N");
                     return std::vector{detail::worst_margin(
                         name, N, c.get_int("euclid.bumps"), c.seed_for(name), sample,
                         [N, w](const HalfSpaceFunction& v) { return check_corollary32(v, N, w); }, c.tol("margin_rel"))};
                   }});
  }
  out.push_back({"halfspace_gradient_hardy_margin", [](const SuiteContext& c) {
                   const HalfSpaceBumpSampler sample;
                   const int N = c.get_int("euclid.N");
                   return std::vector{detail::worst_margin(
                       "halfspace_gradient_hardy_margin", N, c.get_int("euclid.bumps"),
                       c.seed_for("halfspace_gradient_hardy_margin"), sample,
                       [N](const HalfSpaceFunction& v) { return check_halfspace_gradient_hardy(v, N); },
                       c.tol("margin_rel"))};
                 }});
  out.push_back({"ball_weight_comparison", [](const SuiteContext& c) {
                   std::mt19937_64 rng(c.seed_for("ball_weight_comparison"));
                   std::uniform_real_distribution<double> T(0.0, 1.0);
                   int bad = 0;
                   for (int i = 0; i < 1000; ++i)
                     if (!ball_weight_comparison(T(rng)).holds()) ++bad;
                   return std::vector{check_at_most("ball_weight_comparison", 0, bad, 0.0, "1000 points; failures")};
                 }});
  return out;
}

/// The corrected transfer formula must pass; the literal one must fail.
inline Check laplacian_transfer_check() {
  return {"laplacian_transfer", [](const SuiteContext& c) {
            const double tol = c.tol("laplacian_transfer");
            const auto alphas = laplacian_transfer_alphas(5);
            const auto ok = run_laplacian_transfer_suite<5>(MiddleTerm::corrected, alphas, c.seed_for("laplacian_transfer"),
                                                            10, tol);
            const auto lit = run_laplacian_transfer_suite<5>(MiddleTerm::literal, alphas, c.seed_for("laplacian_transfer"),
                                                             10, tol);
            return std::vector{
                check_at_most("laplacian_transfer.corrected", 5, ok.max_residual, tol,
                              detail::describe(ok.failures, "/", ok.cases, " cases above tolerance")),
                check_flag("laplacian_transfer.literal_rejected", 5, !lit.passes(), true,
                           detail::describe(lit.failures, "/", lit.cases, " cases above tolerance; max residual ",
                                            detail::fmt(lit.max_residual)))};
          }};
}

inline std::vector<Check> euclid_checks(const SuiteContext& ctx) {
  std::vector<Check> out{ball_identity_checks(static_cast<std::size_t>(ctx.get_int("euclid.identity_bumps"))),
                         halfspace_identity_checks(), laplacian_transfer_check()};
  for (auto& c : euclid_margin_checks()) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// asymptotics

inline std::vector<Check> asymptotic_checks(const SuiteContext& ctx) {
  const int N = ctx.get_int("asymptotics.N");
  std::vector<Check> out;
  out.push_back({"asymptotic_constants", [](const SuiteContext&) {
                   const auto a = asymptotic_constants(5);
                   return std::vector{
                       check_flag("asymptotic_constants.c1_power", 5, a.c1_power == cpp_rational(1, 12), true,
                                  "c1^3 = " + a.c1_power.str()),
                       check_within("asymptotic_constants.c1", 5, a.c1, std::cbrt(1.0 / 12.0), 1e-15),
                       check_flag("asymptotic_constants.k1", 5, a.k1_exact == cpp_rational(-8, 9), true,
                                  "k1 = " + a.k1_exact.str())};
                 }});
  out.push_back({"expansion_error_ratio", [N](const SuiteContext& c) {
                   const double r0 = c.get_double("asymptotics.r_near"), r1 = c.get_double("asymptotics.r_far");
                   const double e0 = std::abs(expansion_residual(N, r0)), e1 = std::abs(expansion_residual(N, r1));
                   return std::vector{check_at_most("expansion_error_ratio", N, e1 / e0, 0.5,
                                                    detail::describe("|err(", r1, ")| / |err(", r0, ")|"))};
                 }});
  out.push_back({"k1_fit", [N](const SuiteContext&) {
                   std::vector<double> rs;
                   for (double r = 8.0; r <= 12.0; r += 0.25) rs.push_back(r);
                   const double k1 = asymptotic_constants(N).k1;
                   return std::vector{check_within("k1_fit", N, fit_k1(N, rs), k1, 0.05 * std::abs(k1), "r in [8, 12]")};
                 }});
  out.push_back({"asymptotic_consistency", [](const SuiteContext& c) {
                   const int top = c.get_int("asymptotics.consistency_max_N");
                   int bad = 0;
                   for (int n = 5; n <= top; ++n)
                     if (!asymptotic_constants(n).consistent) ++bad;
                   return std::vector{check_at_most("asymptotic_consistency", 0, bad, 0.0)};
                 }});
  return out;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "hardy", "rellich", "euclid", "asymptotics", "all"};
  return names;
}

inline std::vector<Check> suite_checks(const std::string& suite, const SuiteContext& ctx) {
  if (suite == "identities") return identity_checks(ctx);
  if (suite == "hardy") return hardy_checks(ctx);
  if (suite == "rellich") return rellich_checks(ctx);
  if (suite == "euclid") return euclid_checks(ctx);
  if (suite == "asymptotics") return asymptotic_checks(ctx);
  if (suite == "all") {
    std::vector<Check> out;
    for (const auto& s : {"identities", "hardy", "rellich", "euclid", "asymptotics"})
      for (auto& c : suite_checks(s, ctx)) {
        if (std::string(s) == "asymptotics" && c.name == "asymptotic_consistency") continue;
        out.push_back(std::move(c));
      }
    return out;
  }
  throw ArgumentError("unknown suite '" + suite + "'");
}

/// Runs a suite into a manifest (command line and outputs left to the caller).
inline ExperimentManifest run_suite(const std::string& suite, const SuiteContext& ctx) {
  ExperimentManifest m;
  m.suite = suite;
  m.config = ctx.config;
  m.seed = ctx.seed;
  const auto t0 = std::chrono::steady_clock::now();
  m.checks = run_checks(suite_checks(suite, ctx), ctx);
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

}  // namespace hyperhardy
