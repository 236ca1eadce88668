// itg: run impact-time guidance scenarios from config files or bundled suites.

#include <itg/config.hpp>
#include <itg/io.hpp>
#include <itg/runner.hpp>
#include <itg/suites.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <thread>

namespace {

using namespace itg;

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Prints one line per scenario and returns the number of failed runs.
int report_runs(std::span<const RunResult> results) {
  int failed = 0;
  for (const auto& r : results) {
    const auto& m = r.metrics;
    std::cout << (m.success() ? "ok    " : "FAIL  ") << m.label << "  " << to_string(m.status);
    if (m.success()) std::cout << "  t_imp=" << m.impact_time << " s";
    std::cout << "  miss=" << m.miss_distance << " m  effort=" << m.control_effort;
    if (!m.diagnostic.empty()) std::cout << "  (" << m.diagnostic << ")";
    std::cout << '\n';
    failed += !m.success();
  }
  return failed;
}

int cmd_run(const std::string& path, const std::string& out, unsigned workers, std::optional<double> dt,
            std::optional<std::uint64_t> seed) {
  auto suite = parse_config(path);
  for (auto& c : suite.scenarios) {
    if (dt) c.dt = *dt;
    if (seed && c.noise) c.noise->seed = *seed;
    c.validate();
  }
  const auto results = run_batch_results(suite.scenarios, workers);
  write_run_outputs(out, suite.scenarios, results);

  int failed = report_runs(results);
  std::vector<RunMetrics> metrics;
  for (const auto& r : results) metrics.push_back(r.metrics);
  for (const auto& o : evaluate_checks(suite, metrics)) {
    std::cout << (o.passed ? "pass  " : "FAIL  ") << o.check.scenario << '.' << o.check.metric << " = " << o.actual
              << " (expected " << o.check.value << " +/- " << o.check.tolerance << ")";
    if (!o.note.empty()) std::cout << " " << o.note;
    std::cout << '\n';
    failed += !o.passed;
  }
  std::cout << effort_table(metrics).text;
  return failed == 0 ? 0 : 1;
}

int cmd_paper_suite(const std::string& name, const std::string& out, unsigned workers) {
  const auto suite = reference_suite(name);
  std::cout << suite.name << ": " << suite.description << '\n';
  const auto results = run_batch_results(suite.scenarios, workers);
  write_run_outputs(out, suite.scenarios, results);
  int failed = report_runs(results);
  for (const auto& c : suite.check(results)) {
    std::cout << (c.passed ? "pass  " : "FAIL  ") << c.name << "  [" << c.detail << "]\n";
    failed += !c.passed;
  }
  std::vector<RunMetrics> metrics;
  for (const auto& r : results) metrics.push_back(r.metrics);
  std::cout << effort_table(metrics).text;
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impact-time guidance simulation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", suite_name;
  unsigned workers = default_workers();
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run the scenarios of a config file");
  run->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--workers", workers, "Parallel scenarios")->check(CLI::PositiveNumber);
  run->add_option("--dt", dt, "Override the integration step, s")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override the noise seed of noisy scenarios");

  auto* suite = app.add_subcommand("paper-suite", "Run a bundled reference suite and its checks");
  suite->add_option("name", suite_name, "Suite name (see list-suites)")->required();
  suite->add_option("--out", out_dir, "Output directory")->capture_default_str();
  suite->add_option("--workers", workers, "Parallel scenarios")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-suites", "List bundled suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, workers, dt, seed);
    if (*suite) return cmd_paper_suite(suite_name, out_dir, workers);
    if (*list) {
      for (const auto& n : suite_names()) std::cout << n << "  " << reference_suite(n).description << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
