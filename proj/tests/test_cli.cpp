#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "hyperhardy/acceptance.hpp"

using namespace hyperhardy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hyperhardy_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

int run_tool(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, SectionsCommentsAndTypes) {
  const auto c = Config::parse_string(R"(
# top comment
seed = 7
[hardy]
N = 3          # trailing comment
r_min = 1e-6
[identities]
dimensions = 3, 5 ,7
)");
  EXPECT_EQ(c.get_u64("seed", 0), 7u);
  EXPECT_EQ(c.get_int("hardy.N", 0), 3);
  EXPECT_DOUBLE_EQ(c.get_double("hardy.r_min", 0.0), 1e-6);
  EXPECT_EQ(c.get_doubles("identities.dimensions", {}), (std::vector<double>{3, 5, 7}));
  EXPECT_EQ(c.get_int("hardy.M", 42), 42);
  EXPECT_EQ(c.line_of("hardy.r_min"), 6);
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  auto line_of_error = [](const std::string& text) {
    try {
      Config::parse_string(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of_error("a = 1\nb 2\n"), 2);
  EXPECT_EQ(line_of_error("\n\n[hardy\nN = 3\n"), 3);
  EXPECT_EQ(line_of_error("[hardy]\nN = 3\n\nN = 4\n"), 4);
  EXPECT_EQ(line_of_error("= 3\n"), 1);
  EXPECT_EQ(line_of_error("[]\n"), 1);
  try {
    Config::parse_string("a = 1\nb 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Config, TypeErrorsReportTheKeyLine) {
  const auto c = Config::parse_string("[hardy]\nr_min = 1e-6\nN = three\n");
  try {
    c.get_int("hardy.N", 0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(c.get_double("hardy.N", 0.0), ConfigError);
  EXPECT_THROW(Config::parse_string("x = 1.5\n").get_int("x", 0), ConfigError);
  EXPECT_THROW(Config::parse_string("x = -1\n").get_u64("x", 0), ConfigError);
}

TEST(Config, UnknownKeysAreRejectedWithTheirLine) {
  try {
    SuiteContext::from(Config::parse_string("[hardy]\nN = 3\nrmax = 10\n"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_NO_THROW(SuiteContext::from(Config::parse_string("[hardy]\nr_max = 10\n")));
}

TEST(Config, RenderRoundTrips) {
  const auto d = default_config();
  const auto again = Config::parse_string(d.render());
  EXPECT_EQ(again.entries(), d.entries());
}

TEST(Config, OverridesAndScaledTolerances) {
  const auto ctx = SuiteContext::from(Config::parse_string("[run]\nseed = 11\ntol_scale = 10\n"));
  EXPECT_EQ(ctx.seed, 11u);
  EXPECT_DOUBLE_EQ(ctx.tol("identity_rel"), 1e-7);
  EXPECT_THROW(ctx.tol("nonexistent"), ConfigError);
  EXPECT_THROW(SuiteContext::from(Config::parse_string("[run]\ntol_scale = 0\n")), ConfigError);
  EXPECT_NE(ctx.seed_for("a"), ctx.seed_for("b"));
  EXPECT_EQ(ctx.seed_for("a"), SuiteContext::from(Config::parse_string("[run]\nseed = 11\n")).seed_for("a"));
}

TEST(Config, MissingFileIsAnIoError) { EXPECT_THROW(Config::load("/nonexistent/dir/x.cfg"), IoError); }

TEST(Csv, SeventeenSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.33333333333333331");
  for (double x : {1.0 / 3.0, 2.718281828459045, 1e-17, 6.02e23}) EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Csv, HeaderRowsAndQuoting) {
  CsvTable t({"name", "value"});
  t.add_row({"plain", "1"});
  t.add_row({"a,b", "say \"hi\""});
  EXPECT_EQ(t.to_string(), "name,value\nplain,1\n\"a,b\",\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add_values({1.0, 2.0, 3.0}), ArgumentError);
  EXPECT_THROW(CsvTable({}), ArgumentError);
}

TEST(Csv, UnwritablePathIsAnIoError) {
  CsvTable t({"x"});
  EXPECT_THROW(t.write("/nonexistent/dir/out.csv"), IoError);
}

TEST(Manifest, JsonCarriesEveryField) {
  ExperimentManifest m;
  m.command_line = {"hyperhardy", "verify"};
  m.config = default_config();
  m.seed = 5;
  m.suite = "unit";
  m.checks = {check_at_most("b", 3, 1e-12, 1e-8), check_within("a", 5, 2.0, 2.25, 0.1)};
  m.wall_time_s = 0.5;
  const auto j = to_json(m);
  EXPECT_EQ(j["tool_version"], kToolVersion);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["command_line"][1], "verify");
  EXPECT_EQ(j["config"]["hardy.N"], "3");
  EXPECT_EQ(j["status"], "fail");
  EXPECT_EQ(j["failures"], 1);
  EXPECT_EQ(j["checks"][0]["name"], "b");
  EXPECT_EQ(j["checks"][0]["status"], "pass");
  EXPECT_EQ(j["checks"][0]["tolerance"], 1e-8);
  EXPECT_EQ(j["checks"][1]["status"], "fail");
  EXPECT_EQ(j["checks"][1]["target"], 2.25);
  EXPECT_DOUBLE_EQ(j["wall_time_s"].get<double>(), 0.5);
}

TEST(Manifest, CheckHelpers) {
  EXPECT_TRUE(check_at_most("x", 0, 1.0, 1.0).passed);
  EXPECT_FALSE(check_at_most("x", 0, std::nan(""), 1.0).passed);
  EXPECT_TRUE(check_at_least("x", 0, 0.0, -1e-8).passed);
  EXPECT_FALSE(check_within("x", 0, 1.2, 1.0, 0.1).passed);
  EXPECT_FALSE(check_flag("x", 0, false, true).passed);
  EXPECT_FALSE(check_flag("x", 0, true, false).passed);
  EXPECT_TRUE(report_value("x", 0, -5.0).passed);
}

TEST(Suites, RowsSortedAndErrorsBecomeFailures) {
  std::vector<Check> checks{
      {"zeta", [](const SuiteContext&) { return std::vector{check_at_most("zeta", 0, 0.0, 1.0)}; }},
      {"alpha", [](const SuiteContext&) -> std::vector<CheckResult> { throw NumericError("boom"); }},
      {"mid", [](const SuiteContext&) { return std::vector{check_at_most("mid", 2, 0.0, 1.0), check_at_most("mid", 1, 0.0, 1.0)}; }},
  };
  auto ctx = SuiteContext::from(Config{});
  ctx.workers = 3;
  const auto rows = run_checks(checks, ctx);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].name, "alpha");
  EXPECT_FALSE(rows[0].passed);
  EXPECT_NE(rows[0].detail.find("boom"), std::string::npos);
  EXPECT_EQ(rows[1].name, "mid");
  EXPECT_EQ(rows[1].N, 1);
  EXPECT_EQ(rows[2].N, 2);
  EXPECT_EQ(rows[3].name, "zeta");
}

TEST(Suites, IdentitiesPassWithDefaults) {
  const auto m = run_suite("identities", SuiteContext::from(Config{}));
  EXPECT_TRUE(m.all_passed());
  std::set<std::string> names;
  for (const auto& r : m.checks) names.insert(r.name);
  for (const char* expected : {"power_warp_identity", "multiplier_identity", "integer_identity", "coefficient_minima",
                               "asymptotic_consistency", "model_equality"})
    EXPECT_TRUE(names.count(expected)) << expected;
}

TEST(Suites, HardySuiteIncludesSharpConstantRow) {
  const auto m = run_suite("hardy", SuiteContext::from(Config{}));
  EXPECT_TRUE(m.all_passed());
  auto it = std::find_if(m.checks.begin(), m.checks.end(), [](const CheckResult& r) { return r.name == "hardy_sharp"; });
  ASSERT_NE(it, m.checks.end());
  EXPECT_EQ(it->N, 3);
  EXPECT_GE(it->value, 0.25);
  EXPECT_LE(it->value, 0.30);
  const auto csv = checks_table(m.checks).to_string();
  EXPECT_NE(csv.find("\nhardy_sharp,3,pass,0.2"), std::string::npos);
}

TEST(Suites, UnknownSuiteThrows) { EXPECT_THROW(suite_checks("bogus", SuiteContext::from(Config{})), ArgumentError); }

TEST(Suites, SameSeedSameRows) {
  auto ctx = SuiteContext::from(Config::parse_string("[euclid]\nbumps = 5\nidentity_bumps = 3\n"));
  ctx.workers = 1;
  const auto a = run_checks(euclid_margin_checks(), ctx);
  ctx.workers = 4;
  const auto b = run_checks(euclid_margin_checks(), ctx);
  EXPECT_EQ(checks_table(a).to_string(), checks_table(b).to_string());
}

TEST(Acceptance, TenCriteriaInOrder) {
  const auto cs = acceptance_criteria(SuiteContext::from(Config{}));
  ASSERT_EQ(cs.size(), 10u);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(cs[i].id, static_cast<int>(i) + 1);
    EXPECT_FALSE(cs[i].checks.empty());
    EXPECT_GT(cs[i].budget_s, 0.0);
  }
}

TEST(Acceptance, CriterionRowsArePrefixedAndTimed) {
  const auto ctx = SuiteContext::from(Config{});
  const auto cs = acceptance_criteria(ctx);
  const auto o = run_criterion(cs[9], ctx);
  EXPECT_TRUE(o.passed());
  for (const auto& r : o.rows) EXPECT_EQ(r.name.rfind("c10.", 0), 0u) << r.name;
  EXPECT_EQ(o.rows.back().name, "c10.runtime_s");
}

TEST(Cli, VerifyWritesManifestAndCsv) {
  const auto dir = scratch("verify");
  std::string out;
  EXPECT_EQ(run_tool({"--out", dir.string(), "--seed", "3", "verify", "--suite", "identities"}, &out), 0);
  EXPECT_NE(out.find("checks passed"), std::string::npos);
  const auto j = read_json(dir / "manifest.json");
  EXPECT_EQ(j["status"], "pass");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["config"]["run.seed"], "3");
  EXPECT_EQ(j["suite"], "verify identities");
  EXPECT_EQ(j["command_line"][0], "hyperhardy");
  EXPECT_FALSE(j["checks"].empty());
  EXPECT_EQ(j["outputs"][0], "checks.csv");
  const auto rows = csv_rows(slurp(dir / "checks.csv"));
  EXPECT_EQ(rows[0][0], "name");
  EXPECT_EQ(rows.size(), j["checks"].size() + 1);
}

TEST(Cli, FailingCheckGivesNonzeroExitAndStillWritesManifest) {
  const auto dir = scratch("fail");
  EXPECT_EQ(run_tool({"--out", dir.string(), "--tol-scale", "1e-30", "verify", "--suite", "identities"}), 1);
  const auto j = read_json(dir / "manifest.json");
  EXPECT_EQ(j["status"], "fail");
  EXPECT_GT(j["failures"].get<int>(), 0);
  EXPECT_EQ(j["config"]["run.tol_scale"], "1.0000000000000001e-30");
}

TEST(Cli, CorruptedConfigIsAUsageErrorWithLineNumber) {
  const auto dir = scratch("badcfg");
  fs::create_directories(dir);
  const auto cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "[hardy]\nN = 3\nr_min 1e-3\n";
  std::string err;
  EXPECT_EQ(run_tool({"--config", cfg.string(), "--out", dir.string(), "verify", "--suite", "all"}, nullptr, &err), 2);
  EXPECT_NE(err.find("line 3"), std::string::npos);
  const auto j = read_json(dir / "manifest.json");
  EXPECT_EQ(j["status"], "fail");
  EXPECT_NE(j["error"].get<std::string>().find("line 3"), std::string::npos);
}

TEST(Cli, ArgumentErrorsAreUsageErrors) {
  std::string err;
  EXPECT_EQ(run_tool({"verify", "--suite", "bogus"}, nullptr, &err), 2);
  EXPECT_EQ(run_tool({}, nullptr, &err), 2);
  EXPECT_EQ(run_tool({"frobnicate"}, nullptr, &err), 2);
  std::string out;
  EXPECT_EQ(run_tool({"--help"}, &out), 0);
  EXPECT_NE(out.find("verify"), std::string::npos);
}

TEST(Cli, UnwritableOutputIsAnIoError) {
  const auto dir = scratch("io");
  fs::create_directories(dir);
  const auto file = dir / "occupied";
  std::ofstream(file) << "x";
  EXPECT_EQ(run_tool({"--out", (file / "sub").string(), "curve", "--name", "s_of_r"}), 3);
}

TEST(Cli, SOfRCurveIsDeterministic) {
  const auto a = scratch("sofr_a"), b = scratch("sofr_b");
  ASSERT_EQ(run_tool({"--out", a.string(), "curve", "--name", "s_of_r", "--N", "5"}), 0);
  ASSERT_EQ(run_tool({"--out", b.string(), "curve", "--name", "s_of_r", "--N", "5"}), 0);
  const auto text = slurp(a / "s_of_r.csv");
  EXPECT_EQ(text, slurp(b / "s_of_r.csv"));
  const auto rows = csv_rows(text);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "s", "two_term_prediction", "rel_err"}));
  ASSERT_EQ(rows.size(), 25u);
  const double rel_far = std::abs(std::stod(rows.back()[3]));
  EXPECT_LT(rel_far, 1e-12);
  EXPECT_EQ(read_json(a / "manifest.json")["outputs"][0], "s_of_r.csv");
}

TEST(Cli, HLambdaCurveEndpoints) {
  const auto dir = scratch("hlambda");
  ASSERT_EQ(run_tool({"--out", dir.string(), "curve", "--name", "h_lambda", "--N", "5"}), 0);
  const auto rows = csv_rows(slurp(dir / "h_lambda.csv"));
  EXPECT_EQ(rows[0], (std::vector<std::string>{"lambda", "h"}));
  ASSERT_EQ(rows.size(), 18u);
  EXPECT_EQ(std::stod(rows[1][0]), 0.0);
  EXPECT_NEAR(std::stod(rows[1][1]), 2.25, 0.02 * 2.25);
  EXPECT_EQ(std::stod(rows.back()[0]), 4.0);
  EXPECT_NEAR(std::stod(rows.back()[1]), 0.25, 0.02 * 0.25);
}

TEST(Cli, ConvergenceCurveIncrementsShrink) {
  const auto dir = scratch("conv");
  ASSERT_EQ(run_tool({"--out", dir.string(), "curve", "--name", "convergence", "--N", "3"}), 0);
  const auto rows = csv_rows(slurp(dir / "convergence.csv"));
  EXPECT_EQ(rows[0], (std::vector<std::string>{"M", "estimate", "increment"}));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.back()[0], "8192");
  for (std::size_t i = 3; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][2]), std::stod(rows[i - 1][2]));
}

TEST(Cli, CoeffsTable) {
  const auto dir = scratch("coeffs");
  ASSERT_EQ(run_tool({"--out", dir.string(), "coeffs", "--N", "5", "--n-max", "3"}), 0);
  const auto rows = csv_rows(slurp(dir / "coeffs.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "1", "1", "12", "1", "12"}));
}

TEST(Cli, AsymptoticsSharpAndLaplacianTransfer) {
  const auto dir = scratch("misc");
  std::string out;
  ASSERT_EQ(run_tool({"--out", (dir / "a").string(), "asymptotics", "--N", "5"}, &out), 0);
  EXPECT_NE(out.find("c1^(N-2) = 1/12"), std::string::npos);
  EXPECT_NE(out.find("k1 = -8/9"), std::string::npos);
  ASSERT_EQ(run_tool({"--out", (dir / "s").string(), "sharp", "--which", "poincare_gap", "--r-min", "1e-3", "--r-max", "60"}), 0);
  const auto j = read_json(dir / "s" / "manifest.json");
  EXPECT_NEAR(j["checks"][0]["value"].get<double>(), 1.0, 0.01);
  ASSERT_EQ(run_tool({"--out", (dir / "l").string(), "euclid", "lemma71"}, &out), 0);
  EXPECT_NE(out.find("laplacian_transfer.literal_rejected"), std::string::npos);
  EXPECT_EQ(run_tool({"--out", (dir / "c").string(), "euclid", "cor32", "--which", "y4", "--bumps", "3"}), 0);
  EXPECT_EQ(run_tool({"euclid", "cor32", "--which", "3.3"}), 2);
  EXPECT_EQ(run_tool({"--out", (dir / "h").string(), "euclid", "hardy-mazya", "--bumps", "2"}), 0);
}
