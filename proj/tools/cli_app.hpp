#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperhardy/suites.hpp"

namespace hyperhardy::cli {

namespace fs = std::filesystem;

enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2, io_error = 3, runtime_error = 4 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
  std::string out_dir = ".";
};

inline SuiteContext make_context(const Globals& g) {
  Config user;
  if (!g.config_path.empty()) user = Config::load(g.config_path);
  if (g.seed) user.set("run.seed", std::to_string(*g.seed));
  if (g.tol_scale) user.set("run.tol_scale", format_number(*g.tol_scale));
  return SuiteContext::from(user);
}

/// Output directory plus the list of files written into it.
struct Emitter {
  fs::path dir;
  ExperimentManifest* manifest;

  void csv(const std::string& name, const CsvTable& t) const {
    t.write(dir / name);
    manifest->outputs.push_back(name);
  }
};

using Body = std::function<void(const SuiteContext&, ExperimentManifest&, const Emitter&, std::ostream&)>;

/// Runs one verb and always leaves <out>/manifest.json behind.
inline int execute(const std::string& verb, const Globals& g, const std::vector<std::string>& command_line,
                   std::ostream& out, std::ostream& err, const Body& body) {
  ExperimentManifest m;
  m.command_line = {"hyperhardy"};
  m.command_line.insert(m.command_line.end(), command_line.begin(), command_line.end());
  m.suite = verb;
  const fs::path dir(g.out_dir);
  int code = ok;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
    const auto ctx = make_context(g);
    m.config = ctx.config;
    m.seed = ctx.seed;
    body(ctx, m, Emitter{dir, &m}, out);
    code = m.all_passed() ? ok : check_failed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    m.error = std::string("config: ") + e.what();
    code = usage_error;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    m.error = std::string("io: ") + e.what();
    code = io_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    m.error = e.what();
    code = runtime_error;
  }
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_manifest(m, dir / "manifest.json");
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    if (code == ok) code = io_error;
  }
  return code;
}

inline void print_rows(std::ostream& out, const std::vector<CheckResult>& rows) {
  for (const auto& r : rows) {
    out << (r.relation == Relation::reported ? "INFO" : r.passed ? "PASS" : "FAIL") << "  " << r.name;
    if (r.N) out << "  N=" << r.N;
    out << "  value=" << format_number(r.value);
    if (r.relation != Relation::reported) {
      out << "  " << to_string(r.relation) << ' ';
      if (r.relation == Relation::within) out << format_number(r.target) << " +- ";
      out << format_number(r.tolerance);
    }
    if (!r.detail.empty()) out << "  (" << r.detail << ')';
    out << '\n';
  }
}

inline void finish_checks(ExperimentManifest& m, const Emitter& em, std::ostream& out) {
  em.csv("checks.csv", checks_table(m.checks));
  print_rows(out, m.checks);
  out << m.checks.size() - m.failures() << '/' << m.checks.size() << " checks passed\n";
}

// ---------------------------------------------------------------------------
// curves

inline CsvTable h_lambda_curve(int N, std::size_t points, double r_min, double r_max, std::size_t M) {
  const auto curve = sweep_h_lambda(N, default_lambda_grid(N, points), r_min, r_max, M);
  CsvTable t({"lambda", "h"});
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) t.add_values({curve.lambdas[i], curve.h_values[i]});
  return t;
}

inline CsvTable s_of_r_curve(int N, double r_lo, double r_hi, double step) {
  if (!(step > 0.0) || !(r_hi >= r_lo) || !(r_lo > 0.0)) throw ArgumentError("s_of_r curve: bad range");
  const auto a = asymptotic_constants(N);
  CsvTable t({"r", "s", "two_term_prediction", "rel_err"});
  const auto n = static_cast<std::size_t>(std::floor((r_hi - r_lo) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = r_lo + step * static_cast<double>(i);
    const double s = s_of_r(N, r);
    const double two = a.c1 * std::exp(a.mu * r) - a.c2 * std::exp(-a.nu * r);
    t.add_values({r, s, two, (s - two) / s});
  }
  return t;
}

/// Sharp Hardy estimate along M/2^(levels-1), ..., M.
inline CsvTable hardy_convergence_curve(int N, double r_min, double r_max, std::size_t M, int levels) {
  EigenOptions opt;
  opt.refinements = levels;
  const auto est = estimate_sharp_hardy(N, r_min, r_max, M, Grading::geometric, opt);
  CsvTable t({"M", "estimate", "increment"});
  for (std::size_t i = 0; i < est.history.size(); ++i) {
    const double inc = i ? std::abs(est.history[i].second - est.history[i - 1].second)
                         : std::numeric_limits<double>::quiet_NaN();
    t.add_row({std::to_string(est.history[i].first), format_number(est.history[i].second), format_number(inc)});
  }
  return t;
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of Hardy and Rellich inequalities on model manifolds", "hyperhardy"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals g;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  app.add_option("--config", g.config_path, "key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "seed for the test-function generators");
  auto* tol_opt = app.add_option("--tol-scale", tol_scale, "multiplier applied to every tolerance");
  app.add_option("--out", g.out_dir, "output directory for manifest.json and CSV files");

  std::function<int()> action;

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  verify->add_option("--suite", suite, "identities, hardy, rellich, euclid, asymptotics or all")
      ->check(CLI::IsMember(suite_names()));
  verify->callback([&] {
    action = [&] {
      return execute("verify", g, args, out, err, [&](const SuiteContext& ctx, ExperimentManifest& m, const Emitter& em,
                                                      std::ostream& o) {
        m.suite = "verify " + suite;
        m.checks = run_suite(suite, ctx).checks;
        finish_checks(m, em, o);
      });
    };
  });

  // sharp
  auto* sharp = app.add_subcommand("sharp", "estimate a sharp constant with its refinement history");
  std::string which = "hardy";
  int N = 0;
  double r_min = 0.0, r_max = 0.0;
  std::size_t M = 0;
  std::string grading = "geometric";
  sharp->add_option("--which", which)
      ->check(CLI::IsMember({"hardy", "rellich_r2", "one_dim_rellich", "limit_constant", "poincare_gap",
                             "euclidean_rellich"}));
  sharp->add_option("--N", N, "dimension (default from config)");
  sharp->add_option("--r-min", r_min);
  sharp->add_option("--r-max", r_max);
  sharp->add_option("--M", M, "interior grid points");
  sharp->add_option("--grading", grading)->check(CLI::IsMember({"uniform", "log_graded", "geometric"}));
  sharp->callback([&] {
    action = [&] {
      return execute("sharp", g, args, out, err, [&](const SuiteContext& ctx, ExperimentManifest& m, const Emitter& em,
                                                     std::ostream& o) {
        const bool hardy_side = which == "hardy" || which == "poincare_gap";
        const std::string sec = hardy_side ? "hardy." : "rellich.";
        const int n = N ? N : ctx.get_int(sec + "N");
        const double lo = r_min > 0 ? r_min : ctx.get_double(sec + "r_min");
        const double hi = r_max > 0 ? r_max : ctx.get_double(sec + "r_max");
        const std::size_t m_grid = M ? M : static_cast<std::size_t>(ctx.get_int(sec + "M"));
        const Grading gr = grading_from_string(grading);
        ConstantEstimate est;
        if (which == "hardy") est = estimate_sharp_hardy(n, lo, hi, m_grid, gr);
        else if (which == "rellich_r2") est = estimate_sharp_rellich_r2(n, lo, hi, m_grid, gr);
        else if (which == "poincare_gap") est = estimate_poincare_gap(n, lo, hi, m_grid, gr);
        else if (which == "one_dim_rellich") est = one_dimensional_rellich(r_min > 0 ? r_min : 1e-14, r_max > 0 ? r_max : 1e14, M ? M : 8192);
        else if (which == "limit_constant") est = prop66_limit_constant(r_min > 0 ? r_min : 1e-12, r_max > 0 ? r_max : 1e12, M ? M : 8192);
        else est = estimate_euclidean_rellich(n, r_min > 0 ? r_min : 1e-10, r_max > 0 ? r_max : 1e10, M ? M : 8192);
        CsvTable t({"M", "estimate"});
        for (const auto& [mm, v] : est.history) t.add_row({std::to_string(mm), format_number(v)});
        em.csv("sharp_" + which + ".csv", t);
        m.checks.push_back(report_value(which, n, est.value,
                                        detail::describe("r_min=", est.r_min, " r_max=", est.r_max, " M=", est.M)));
        m.checks.push_back(report_value(which + ".bracket_width", n, est.bracket_width));
        print_rows(o, m.checks);
      });
    };
  });

  // sweep-lambda
  auto* sweep = app.add_subcommand("sweep-lambda", "h(lambda) over [0, (N-1)^2/4]");
  std::size_t points = 0;
  sweep->add_option("--N", N);
  sweep->add_option("--points", points);
  sweep->add_option("--r-min", r_min);
  sweep->add_option("--r-max", r_max);
  sweep->add_option("--M", M);
  sweep->callback([&] {
    action = [&] {
      return execute("sweep-lambda", g, args, out, err, [&](const SuiteContext& ctx, ExperimentManifest& m,
                                                            const Emitter& em, std::ostream& o) {
        const int n = N ? N : 5;
        const auto t = h_lambda_curve(n, points ? points : static_cast<std::size_t>(ctx.get_int("hardy.lambda_points")),
                                      r_min > 0 ? r_min : ctx.get_double("hardy.lambda_r_min"),
                                      r_max > 0 ? r_max : ctx.get_double("hardy.lambda_r_max"),
                                      M ? M : static_cast<std::size_t>(ctx.get_int("hardy.lambda_M")));
        em.csv("h_lambda.csv", t);
        o << t.to_string();
        m.checks.push_back(report_value("h_lambda.points", n, static_cast<double>(t.rows().size())));
      });
    };
  });

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "exact mode coefficients A_n, B_n");
  int n_max = 10;
  coeffs->add_option("--N", N);
  coeffs->add_option("--n-max", n_max);
  coeffs->callback([&] {
    action = [&] {
      return execute("coeffs", g, args, out, err, [&](const SuiteContext& ctx, ExperimentManifest& m, const Emitter& em,
                                                      std::ostream& o) {
        const int n = N ? N : ctx.get_int("rellich.N");
        CsvTable t({"n", "lambda_n", "d_n", "A_n", "B_n", "A_n_exact", "B_n_exact"});
        for (const auto& row : mode_table(n, n_max))
          t.add_row({std::to_string(row.n), std::to_string(row.lambda_n), row.d_n.str(),
                     format_number(static_cast<double>(row.A_n)), format_number(static_cast<double>(row.B_n)),
                     row.A_n.str(), row.B_n.str()});
        em.csv("coeffs.csv", t);
        o << t.to_string();
        m.checks.push_back(check_flag("min_A_closed_form", n, min_coeff_A(n, n_max).value == min_A_closed_form(n), true,
                                      "min A_n = " + min_A_closed_form(n).str()));
        m.checks.push_back(check_flag("min_B_closed_form", n, min_coeff_B(n, n_max).value == min_B_closed_form(n), true,
                                      "min B_n = " + min_B_closed_form(n).str()));
      });
    };
  });

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "constants of s(r) and the tabulated expansion");
  asym->add_option("--N", N);
  asym->callback([&] {
    action = [&] {
      return execute("asymptotics", g, args, out, err, [&](const SuiteContext& ctx, ExperimentManifest& m,
                                                           const Emitter& em, std::ostream& o) {
        const int n = N ? N : ctx.get_int("asymptotics.N");
        const auto a = asymptotic_constants(n);
        o << "c1^(N-2) = " << a.c1_power.str() << "\nc2/c1 = " << a.c2_over_c1.str() << "\nk1 = " << a.k1_exact.str()
          << "\nc1 = " << format_number(a.c1) << "\nc2 = " << format_number(a.c2) << '\n';
        em.csv("s_of_r.csv", s_of_r_curve(n, 0.5, 12.0, 0.5));
        m.checks.push_back(report_value("c1", n, a.c1, "c1^(N-2) = " + a.c1_power.str()));
        m.checks.push_back(report_value("c2", n, a.c2, "c2/c1 = " + a.c2_over_c1.str()));
        m.checks.push_back(report_value("k1", n, a.k1, "k1 = " + a.k1_exact.str()));
        m.checks.push_back(check_flag("consistency", n, a.consistent, true, "k1 - 2 c2/c1 == -4(N-1)/(N+1)"));
      });
    };
  });

  // curve
  auto* curve = app.add_subcommand("curve", "emit plot data as CSV");
  std::string curve_name;
  int levels = 4;
  curve->add_option("--name", curve_name)->required()->check(CLI::IsMember({"h_lambda", "s_of_r", "convergence"}));
  curve->add_option("--N", N);
  curve->add_option("--points", points);
  curve->add_option("--r-min", r_min);
  curve->add_option("--r-max", r_max);
  curve->add_option("--M", M);
  curve->add_option("--levels", levels, "grid levels for the convergence curve");
  curve->callback([&] {
    action = [&] {
      return execute("curve", g, args, out, err, [&](const SuiteContext& ctx, ExperimentManifest& m, const Emitter& em,
                                                     std::ostream&) {
        CsvTable t({"x"});
        int n = N;
        if (curve_name == "h_lambda") {
          n = n ? n : 5;
          t = h_lambda_curve(n, points ? points : static_cast<std::size_t>(ctx.get_int("hardy.lambda_points")),
                             r_min > 0 ? r_min : ctx.get_double("hardy.lambda_r_min"),
                             r_max > 0 ? r_max : ctx.get_double("hardy.lambda_r_max"),
                             M ? M : static_cast<std::size_t>(ctx.get_int("hardy.lambda_M")));
        } else if (curve_name == "s_of_r") {
          n = n ? n : ctx.get_int("asymptotics.N");
          t = s_of_r_curve(n, r_min > 0 ? r_min : 0.5, r_max > 0 ? r_max : 12.0, 0.5);
        } else {
          n = n ? n : ctx.get_int("hardy.N");
          t = hardy_convergence_curve(n, r_min > 0 ? r_min : ctx.get_double("hardy.r_min"),
                                      r_max > 0 ? r_max : ctx.get_double("hardy.r_max"),
                                      M ? M : static_cast<std::size_t>(ctx.get_int("hardy.M")), levels);
        }
        em.csv(curve_name + ".csv", t);
        m.checks.push_back(report_value(curve_name + ".rows", n, static_cast<double>(t.rows().size())));
      });
    };
  });

  // euclid
  auto* euclid = app.add_subcommand("euclid", "ball and half-space checks");
  euclid->require_subcommand(1);
  std::size_t bumps = 0;
  auto euclid_verb = [&](const std::string& name, const std::string& help,
                         std::function<std::vector<CheckResult>(const SuiteContext&)> rows) {
    auto* sub = euclid->add_subcommand(name, help);
    sub->add_option("--N", N);
    sub->add_option("--bumps", bumps, "number of seeded test functions");
    return sub->callback([&, name, rows] {
      action = [&, name, rows] {
        return execute("euclid " + name, g, args, out, err,
                       [&](const SuiteContext& ctx, ExperimentManifest& m, const Emitter& em, std::ostream& o) {
                         m.checks = rows(ctx);
                         sort_by_name(m.checks);
                         finish_checks(m, em, o);
                       });
      };
    });
  };
  auto count = [&](const SuiteContext& ctx, const char* key) {
    return bumps ? bumps : static_cast<std::size_t>(ctx.get_int(key));
  };
  euclid_verb("ball-identities", "ball-model identities on seeded bumps", [&](const SuiteContext& ctx) {
    const int n = N ? N : ctx.get_int("euclid.N");
    const BumpSampler sample{0.05, 6.0};
    std::vector<CheckResult> rows;
    for (auto w : {BallIdentity::gradient, BallIdentity::mass, BallIdentity::hardy_weight}) {
      const std::string name = std::string("ball_identity.") + to_string(w);
      std::mt19937_64 rng(ctx.seed_for(name) + n);
      double worst = 0.0;
      const auto k = count(ctx, "euclid.identity_bumps");
      for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, ball_identity_check(sample(rng), n, w).discrepancy);
      rows.push_back(check_at_most(name, n, worst, ctx.tol("ball_identity_rel")));
    }
    return rows;
  });
  euclid_verb("cor22", "Hardy inequality on the unit ball", [&](const SuiteContext& ctx) {
    const int n = N ? N : ctx.get_int("euclid.N");
    return std::vector{detail::worst_margin(
        "ball_hardy_margin", n, count(ctx, "euclid.bumps"), ctx.seed_for("ball_hardy_margin") + n, BumpSampler{0.01, 0.99},
        [n](const RadialFunction& v) { return check_corollary22(v, n); }, ctx.tol("margin_rel"))};
  });
  euclid_verb("cor23", "Hardy-Maz'ya inequality on the half-space", [&](const SuiteContext& ctx) {
    const int n = N ? N : 3;
    return std::vector{detail::worst_margin(
        "hardy_mazya_margin", n, count(ctx, "euclid.bumps"), ctx.seed_for("hardy_mazya_margin") + n,
        HalfSpaceBumpSampler{}, [n](const HalfSpaceFunction& v) { return check_corollary23(v, n); },
        ctx.tol("margin_rel"))};
  });
  std::string variant = "y2";
  auto* cor32 = euclid_verb("cor32", "Rellich inequality on the half-space", [&](const SuiteContext& ctx) {
    const int n = N ? N : ctx.get_int("euclid.N");
    const auto w = halfspace_rellich_from_string(variant);
    const std::string name = std::string("halfspace_rellich_margin.") + to_string(w);
    return std::vector{detail::worst_margin(
        name, n, count(ctx, "euclid.bumps"), ctx.seed_for(name), HalfSpaceBumpSampler{},
        [n, w](const HalfSpaceFunction& v) { return check_corollary32(v, n, w); }, ctx.tol("margin_rel"))};
  });
  cor32->add_option("--which", variant, "y2 or y4 weight")->check(CLI::IsMember({"y2", "y4"}));
  euclid_verb("lemma71", "hyperbolic Laplacian transfer formula, corrected and literal",
              [&](const SuiteContext& ctx) { return laplacian_transfer_check().run(ctx); });

  const std::pair<const char*, const char*> aliases[] = {
      {"cor22", "ball-hardy"}, {"cor23", "hardy-mazya"}, {"cor32", "halfspace-rellich"}, {"lemma71", "laplacian-transfer"}};
  for (const auto& [name, alias] : aliases) euclid->get_subcommand(name)->alias(alias);

  std::vector<const char*> argv{"hyperhardy"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? ok : usage_error;
  }
  if (seed_opt->count()) g.seed = seed;
  if (tol_opt->count()) g.tol_scale = tol_scale;
  if (!action) return usage_error;
  return action();
}

}  // namespace hyperhardy::cli
