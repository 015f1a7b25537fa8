#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperhardy/acceptance.hpp"

int main(int argc, char** argv) {
  namespace hh = hyperhardy;
  CLI::App app{"Runs every acceptance criterion and prints one PASS/FAIL line per criterion", "acceptance"};
  std::string out_dir = "acceptance_out";
  std::vector<int> only;
  app.add_option("--out", out_dir, "directory for manifest.json and checks.csv");
  app.add_option("--only", only, "criterion ids to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const auto ctx = hh::SuiteContext::from(hh::Config{});
  hh::ExperimentManifest m;
  m.command_line.assign(argv, argv + argc);
  m.suite = "acceptance";
  m.config = ctx.config;
  m.seed = ctx.seed;
  const auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  for (const auto& c : hh::acceptance_criteria(ctx)) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto o = hh::run_criterion(c, ctx);
    for (const auto& r : o.rows)
      if (!r.passed) std::cerr << "  failed: " << r.name << " value=" << hh::format_number(r.value) << ' ' << r.detail << '\n';
    std::cout << (o.passed() ? "PASS" : "FAIL") << "  " << c.id << "  " << c.title << "  (" << std::fixed
              << std::setprecision(1) << o.wall_time_s << " s)" << std::endl;
    if (!o.passed()) ++failed;
    m.checks.insert(m.checks.end(), o.rows.begin(), o.rows.end());
  }
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::filesystem::create_directories(out_dir);
  hh::write_manifest(m, std::filesystem::path(out_dir) / "manifest.json");
  hh::checks_table(m.checks).write(std::filesystem::path(out_dir) / "checks.csv");
  std::cout << (failed ? "FAIL" : "PASS") << "  acceptance: " << failed << " criteria failed" << std::endl;
  return failed ? 1 : 0;
}
