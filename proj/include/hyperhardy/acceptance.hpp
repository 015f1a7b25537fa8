#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "hyperhardy/suites.hpp"

namespace hyperhardy {

struct Criterion {
  int id = 0;
  std::string title;
  /// Wall-clock budget in seconds; recorded as its own row.
  double budget_s = 0.0;
  std::vector<Check> checks;
};

struct CriterionOutcome {
  int id = 0;
  std::string title;
  std::vector<CheckResult> rows;
  double wall_time_s = 0.0;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckResult& r) { return r.passed; });
  }
};

inline std::vector<Criterion> acceptance_criteria(const SuiteContext& ctx) {
  std::vector<Criterion> out;
  {
    Criterion c{1, "exact identities", 5.0, {}};
    for (auto& k : identity_checks(ctx))
      if (k.name != "ground_state_equation") c.checks.push_back(std::move(k));
    out.push_back(std::move(c));
  }
  out.push_back({2, "Poincare gap", 30.0, {poincare_gap_check(3, 1e-3, 60.0, 8192), poincare_gap_check(5, 1e-3, 60.0, 8192)}});
  out.push_back({3, "sharp Hardy constant", 60.0, {hardy_sharp_trend_check(3, 1e-6, {25.0, 50.0, 100.0}, 8192)}});
  out.push_back({4, "h(lambda) curve", 300.0, {lambda_curve_check(5, 1e-12, 1e26, 8192, 17)}});
  out.push_back({5, "Rellich constants", 300.0,
                 {euclidean_rellich_check(5), rellich_r2_check(5, 1e-3, {15.0, 30.0, 60.0}, 4096),
                  one_dimensional_rellich_check()}});
  {
    Criterion c{6, "margin suites", 120.0, hardy_margin_checks()};
    for (auto& k : rellich_margin_checks()) c.checks.push_back(std::move(k));
    for (auto& k : euclid_margin_checks())
      if (k.name != "ball_weight_comparison") c.checks.push_back(std::move(k));
    out.push_back(std::move(c));
  }
  out.push_back({7, "cross-model identities", 300.0, {ball_identity_checks(20), halfspace_identity_checks(), reduced_form_check(20)}});
  {
    Criterion c{8, "asymptotics", 60.0, asymptotic_checks(ctx)};
    out.push_back(std::move(c));
  }
  out.push_back({9, "criticality diagnostics", 60.0, criticality_checks()});
  out.push_back({10, "Laplacian transfer adjudication", 60.0, {laplacian_transfer_check()}});
  return out;
}

inline CriterionOutcome run_criterion(const Criterion& c, const SuiteContext& ctx) {
  CriterionOutcome o;
  o.id = c.id;
  o.title = c.title;
  const auto t0 = std::chrono::steady_clock::now();
  o.rows = run_checks(c.checks, ctx);
  o.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.rows.push_back(check_at_most("runtime_s", 0, o.wall_time_s, c.budget_s));
  const std::string prefix = (c.id < 10 ? "c0" : "c") + std::to_string(c.id) + ".";
  for (auto& r : o.rows) r.name = prefix + r.name;
  return o;
}

}  // namespace hyperhardy
