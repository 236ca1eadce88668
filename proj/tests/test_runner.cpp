#include "oracles.hpp"

#include <itg/io.hpp>
#include <itg/runner.hpp>
#include <itg/suites.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace itg;

namespace {

ScenarioConfig baseline(Law law, double sigma0_deg, std::string label = "s") {
  ScenarioConfig c;
  c.label = std::move(label);
  c.law = law;
  c.gamma_M0 = oracle::rad(sigma0_deg);
  return c;
}

std::string metrics_bytes(std::span<const RunMetrics> m) {
  std::ostringstream os;
  write_metrics_csv(os, m);
  return os.str();
}

}  // namespace

TEST_CASE("step phases run in the documented order") {
  auto cfg = baseline(Law::png, 10.0);
  cfg.noise = NoiseConfig{};
  cfg.t_d = 0.02;
  cfg.t_max = 0.05;
  std::vector<std::pair<StepPhase, long>> seen;
  RunOptions opt;
  opt.trace = [&](StepPhase p, long step) { seen.emplace_back(p, step); };
  run_scenario(cfg, opt);
  REQUIRE(seen.size() >= 10);
  REQUIRE(seen.size() % 5 == 0);
  const StepPhase order[] = {StepPhase::sense, StepPhase::errors, StepPhase::command, StepPhase::integrate,
                             StepPhase::log};
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i].first == order[i % 5]);
    CHECK(seen[i].second == static_cast<long>(i / 5));
  }
}

TEST_CASE("head-on proportional navigation") {
  const auto r = run_scenario(baseline(Law::png, 0.0));
  REQUIRE(r.metrics.success());
  CHECK(std::abs(r.metrics.impact_time - 40.0) < 1e-3);
  CHECK(r.metrics.control_effort == 0.0);
  CHECK(r.metrics.miss_distance < 250.0 * 1e-3);
}

TEST_CASE("proportional navigation arrival matches the time-to-go estimate") {
  const auto r = run_scenario(baseline(Law::png, 60.0));
  REQUIRE(r.metrics.success());
  const double estimate = oracle::tgo(10000.0, oracle::rad(60), 250.0);
  CHECK(std::abs(r.metrics.impact_time - estimate) / estimate < 0.05);
}

TEST_CASE("deviated pursuit holds the lead angle") {
  auto cfg = baseline(Law::deviated_pursuit, 65.0);
  cfg.t_max = 30.0;
  cfg.t_d = 20.0;
  cfg.log_every = 1;
  const auto r = run_scenario(cfg);
  REQUIRE(!r.trajectory.empty());
  double worst = 0.0;
  for (const auto& row : r.trajectory) worst = std::max(worst, std::abs(row.sigma - oracle::rad(65)));
  CHECK(r.trajectory.back().t >= 29.9);
  CHECK(worst < 1e-6);
  // Range closes at the constant rate V cos(sigma).
  CHECK(r.trajectory.back().r == doctest::Approx(10000.0 - 250.0 * std::cos(oracle::rad(65)) * r.trajectory.back().t)
                                     .epsilon(1e-9));
}

TEST_CASE("backstepping run at the reference point") {
  const auto r = run_scenario(reference_scenario("ref", 60.0, 42.0));
  const auto& m = r.metrics;
  REQUIRE(m.success());
  CHECK(std::abs(m.impact_time - 42.0) < 0.1);
  CHECK(m.miss_distance < 5.0);
  CHECK_FALSE(m.fov_violated);
  CHECK_FALSE(m.actuator_violated);
  CHECK(m.peak_abs_a_M < 20.0 * kGravity);
  CHECK(m.terminal_window_abs_sigma < oracle::rad(2));
  CHECK(m.terminal_window_abs_a_M < 0.05 * 20.0 * kGravity);
}

TEST_CASE("two-stage run records its switch") {
  const auto r = run_scenario(reference_scenario("ms", 60.0, 55.0, Law::multi_stage));
  const auto& m = r.metrics;
  REQUIRE(m.success());
  REQUIRE(m.realized_switch_time.has_value());
  CHECK(*m.realized_switch_time > 0.0);
  CHECK(m.switch_tgo_mismatch < 2e-3);
  CHECK(std::abs(m.impact_time - 55.0) < 0.2);
}

TEST_CASE("control effort is step-size converged") {
  auto cfg = reference_scenario("fine", 60.0, 42.0);
  const double e1 = run_scenario(cfg, {{}, false, false}).metrics.control_effort;
  cfg.dt = 5e-4;
  cfg.log_every = 200;
  const double e2 = run_scenario(cfg, {{}, false, false}).metrics.control_effort;
  CHECK(std::abs(e1 - e2) / e2 < 0.005);
}

TEST_CASE("batch execution") {
  CHECK(run_batch({}, 4).empty());

  std::vector<ScenarioConfig> cfgs;
  for (int i = 0; i < 6; ++i) {
    auto c = reference_scenario("b" + std::to_string(i), 20.0 + 8.0 * i, 42.0);
    if (i % 2) {
      c.noise = NoiseConfig{};
      c.noise->seed = 100 + i;
      c.gains.png_handover = 1.0;
    }
    cfgs.push_back(c);
  }
  const auto serial = run_batch(cfgs, 1);
  const auto parallel = run_batch(cfgs, 8);
  CHECK(metrics_bytes(serial) == metrics_bytes(parallel));
  for (std::size_t i = 0; i < cfgs.size(); ++i) CHECK(serial[i].label == cfgs[i].label);

  cfgs[1].label = cfgs[0].label;
  CHECK_THROWS_AS(run_batch(cfgs, 2), ConfigError);
}

TEST_CASE("a failing scenario does not disturb its neighbours") {
  std::vector<ScenarioConfig> cfgs{baseline(Law::png, 0.0, "ok"), baseline(Law::png, 0.0, "bad"),
                                   baseline(Law::png, 30.0, "ok2")};
  cfgs[1].V_M = std::nan("");
  const auto res = run_batch_results(cfgs, 3);
  CHECK(res[0].metrics.success());
  CHECK(res[1].metrics.status == RunStatus::aborted);
  CHECK_FALSE(res[1].metrics.diagnostic.empty());
  CHECK(res[2].metrics.success());
}

TEST_CASE("scenario validation") {
  auto c = reference_scenario("x", 60.0, 50.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.law = Law::multi_stage;
  CHECK_NOTHROW(c.validate());
  c.t_d = 300.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = reference_scenario("y", 60.0, 42.0);
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("effort table") {
  RunMetrics ok;
  ok.label = "one";
  ok.status = RunStatus::intercepted;
  ok.impact_time = 42.0;
  ok.miss_distance = 0.25;
  ok.control_effort = 9011.1;
  RunMetrics bad = ok;
  bad.label = "two";
  bad.status = RunStatus::timeout;
  const std::vector<RunMetrics> rows{ok, bad};
  const auto t = effort_table(rows);
  CHECK(t.csv.find("one") != std::string::npos);
  CHECK(t.csv.find("9011.1") != std::string::npos);
  CHECK(t.csv.find("0.25") != std::string::npos);
  CHECK(t.text.find("timeout") != std::string::npos);
}
