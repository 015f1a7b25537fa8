#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hyperhardy/config.hpp"
#include "hyperhardy/csv.hpp"
#include "hyperhardy/errors.hpp"
#include "json.hpp"

namespace hyperhardy {

inline constexpr const char* kToolVersion = "0.1.0";

/// How a check value is judged against its tolerance.
enum class Relation { at_most, at_least, within, equals, reported };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::at_most: return "<=";
    case Relation::at_least: return ">=";
    case Relation::within: return "+-";
    case Relation::equals: return "==";
    case Relation::reported: return "info";
  }
  return "?";
}

/// One row of a suite report.
struct CheckResult {
  std::string name;
  int N = 0;
  bool passed = false;
  double value = 0.0;
  /// Bound (at_most, at_least), half-width (within) or target (equals).
  double tolerance = 0.0;
  Relation relation = Relation::at_most;
  /// Target for `within`; unused otherwise.
  double target = 0.0;
  std::string detail;
};

inline CheckResult check_at_most(std::string name, int N, double value, double bound, std::string detail = {}) {
  return {std::move(name), N, value <= bound, value, bound, Relation::at_most, 0.0, std::move(detail)};
}

inline CheckResult check_at_least(std::string name, int N, double value, double bound, std::string detail = {}) {
  return {std::move(name), N, value >= bound, value, bound, Relation::at_least, 0.0, std::move(detail)};
}

inline CheckResult check_within(std::string name, int N, double value, double target, double half_width,
                                std::string detail = {}) {
  return {std::move(name), N,           std::abs(value - target) <= half_width, value, half_width,
          Relation::within, target, std::move(detail)};
}

/// Boolean outcome recorded as value 1 (true) or 0 against the expected value.
inline CheckResult check_flag(std::string name, int N, bool observed, bool expected, std::string detail = {}) {
  const double v = observed ? 1.0 : 0.0;
  return {std::move(name), N, observed == expected, v, expected ? 1.0 : 0.0, Relation::equals, 0.0, std::move(detail)};
}

/// Value recorded without a pass/fail judgement.
inline CheckResult report_value(std::string name, int N, double value, std::string detail = {}) {
  return {std::move(name), N, true, value, 0.0, Relation::reported, 0.0, std::move(detail)};
}

inline void sort_by_name(std::vector<CheckResult>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const CheckResult& a, const CheckResult& b) {
    return a.name != b.name ? a.name < b.name : a.N < b.N;
  });
}

struct ExperimentManifest {
  std::vector<std::string> command_line;
  Config config;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string suite;
  std::vector<CheckResult> checks;
  double wall_time_s = 0.0;
  /// Set when the run aborted before all checks finished.
  std::string error;
  std::vector<std::string> outputs;

  bool all_passed() const {
    if (!error.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
  }
};

inline nlohmann::ordered_json to_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["N"] = c.N;
  j["status"] = c.passed ? "pass" : "fail";
  j["value"] = c.value;
  j["relation"] = to_string(c.relation);
  j["tolerance"] = c.tolerance;
  if (c.relation == Relation::within) j["target"] = c.target;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline nlohmann::ordered_json to_json(const ExperimentManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.tool_version;
  j["command_line"] = m.command_line;
  j["suite"] = m.suite;
  j["seed"] = m.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["status"] = m.all_passed() ? "pass" : "fail";
  j["failures"] = m.failures();
  if (!m.error.empty()) j["error"] = m.error;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& c : m.checks) rows.push_back(to_json(c));
  j["checks"] = rows;
  j["outputs"] = m.outputs;
  j["wall_time_s"] = m.wall_time_s;
  return j;
}

inline void write_manifest(const ExperimentManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << to_json(m).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// name,N,status,value,relation,tolerance,target,detail
inline CsvTable checks_table(const std::vector<CheckResult>& rows) {
  CsvTable t({"name", "N", "status", "value", "relation", "tolerance", "target", "detail"});
  for (const auto& c : rows)
    t.add_row({c.name, std::to_string(c.N), c.passed ? "pass" : "fail", format_number(c.value), to_string(c.relation),
               format_number(c.tolerance), c.relation == Relation::within ? format_number(c.target) : "", c.detail});
  return t;
}

}  // namespace hyperhardy
