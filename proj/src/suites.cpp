#include <itg/suites.hpp>

#include <cmath>
#include <sstream>

namespace itg {

namespace {

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

SuiteCheck expect(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

void check_timing(std::vector<SuiteCheck>& out, const RunResult& r, double t_d, double miss_tol, double time_tol) {
  const auto& m = r.metrics;
  out.push_back(expect(m.label + ": intercepts", m.success(), to_string(m.status)));
  out.push_back(expect(m.label + ": miss < " + fmt(miss_tol), m.miss_distance < miss_tol,
                       "miss " + fmt(m.miss_distance) + " m"));
  out.push_back(expect(m.label + ": |impact - t_d| < " + fmt(time_tol),
                       m.success() && std::abs(m.impact_time - t_d) < time_tol,
                       "impact " + fmt(m.impact_time, 8) + " s"));
}

void check_bounds(std::vector<SuiteCheck>& out, const RunResult& r, const ScenarioConfig& cfg) {
  const auto& m = r.metrics;
  out.push_back(expect(m.label + ": |sigma| <= sigma_max", !m.fov_violated,
                       "peak " + fmt(rad2deg(m.peak_abs_sigma)) + " deg"));
  out.push_back(expect(m.label + ": |a_M| < a_max", !m.actuator_violated && m.peak_abs_a_M < cfg.actuator.a_max,
                       "peak " + fmt(m.peak_abs_a_M / kGravity) + " g"));
}

void check_terminal(std::vector<SuiteCheck>& out, const RunResult& r, const ScenarioConfig& cfg) {
  const auto& m = r.metrics;
  out.push_back(expect(m.label + ": terminal |sigma| < 2 deg", m.terminal_window_abs_sigma < deg2rad(2.0),
                       fmt(rad2deg(m.terminal_window_abs_sigma)) + " deg"));
  out.push_back(expect(m.label + ": terminal |a_M| < 0.05 a_max",
                       m.terminal_window_abs_a_M < 0.05 * cfg.actuator.a_max,
                       fmt(m.terminal_window_abs_a_M) + " m/s^2"));
}

ReferenceSuite case1() {
  ReferenceSuite s{"case1-headings", "single-stage law, t_d = 42 s, initial lead angles 20/60/75 deg", {}, {}};
  for (double sigma0 : {20.0, 60.0, 75.0}) {
    s.scenarios.push_back(reference_scenario("sigma0-" + fmt(sigma0), sigma0, 42.0));
  }
  const auto cfgs = s.scenarios;
  s.check = [cfgs](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
      check_timing(out, results[i], 42.0, 5.0, 0.1);
      check_bounds(out, results[i], cfgs[i]);
      check_terminal(out, results[i], cfgs[i]);
    }
    return out;
  };
  return s;
}

ReferenceSuite case2() {
  ReferenceSuite s{"case2-impact-times", "single-stage law, sigma0 = 60 deg, t_d = 41/42/43 s", {}, {}};
  for (double t_d : {41.0, 42.0, 43.0}) s.scenarios.push_back(reference_scenario("td-" + fmt(t_d), 60.0, t_d));
  const auto cfgs = s.scenarios;
  s.check = [cfgs](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
      check_timing(out, results[i], cfgs[i].t_d, 5.0, 0.1);
      check_bounds(out, results[i], cfgs[i]);
      check_terminal(out, results[i], cfgs[i]);
    }
    return out;
  };
  return s;
}

ReferenceSuite case3() {
  ReferenceSuite s{"case3-amax", "single-stage law, t_d = 42 s, sigma0 = 60 deg, a_max = 3/5/7/9 g", {}, {}};
  for (double g : {3.0, 5.0, 7.0, 9.0}) {
    auto c = reference_scenario("amax-" + fmt(g) + "g", 60.0, 42.0);
    c.actuator.a_max = g * kGravity;
    s.scenarios.push_back(c);
  }
  const auto cfgs = s.scenarios;
  s.check = [cfgs](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& m = results[i].metrics;
      out.push_back(expect(m.label + ": intercepts with miss < 5 m", m.success() && m.miss_distance < 5.0,
                           "miss " + fmt(m.miss_distance) + " m"));
      out.push_back(expect(m.label + ": peak |a_M| < a_max",
                           !m.actuator_violated && m.peak_abs_a_M < cfgs[i].actuator.a_max,
                           "peak " + fmt(m.peak_abs_a_M / kGravity, 6) + " g"));
    }
    for (std::size_t i = 1; i < results.size(); ++i) {
      const auto& a = results[i - 1].metrics;
      const auto& b = results[i].metrics;
      out.push_back(expect("convergence time nonincreasing: " + a.label + " -> " + b.label,
                           b.rho_settle_time <= a.rho_settle_time,
                           fmt(a.rho_settle_time) + " s -> " + fmt(b.rho_settle_time) + " s"));
    }
    return out;
  };
  return s;
}

ReferenceSuite case4() {
  ReferenceSuite s{"case4-large-td", "two-stage law, sigma_d = 65 deg, t_d = 42/55/65 s", {}, {}};
  for (double t_d : {42.0, 55.0, 65.0}) {
    s.scenarios.push_back(reference_scenario("td-" + fmt(t_d), 60.0, t_d, Law::multi_stage));
  }
  const auto cfgs = s.scenarios;
  s.check = [cfgs](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    const double reference[] = {0.0, 24.39, 44.63};
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& m = results[i].metrics;
      check_timing(out, results[i], cfgs[i].t_d, 5.0, 0.2);
      const double sw = m.realized_switch_time.value_or(std::nan(""));
      if (i == 0) {
        out.push_back(expect(m.label + ": switch at t = 0", sw == 0.0, "switch " + fmt(sw) + " s"));
      } else {
        out.push_back(expect(m.label + ": switch within 25% of " + fmt(reference[i]) + " s",
                             std::abs(sw - reference[i]) <= 0.25 * reference[i],
                             "switch " + fmt(sw, 6) + " s, analytic " + fmt(m.analytic_switch_time, 6) + " s"));
        out.push_back(expect(m.label + ": |t_go^d - t_go^M| < 2 dt at switch",
                             m.switch_tgo_mismatch < 2.0 * cfgs[i].dt, fmt(m.switch_tgo_mismatch) + " s"));
        out.push_back(expect(m.label + ": |sigma - sigma_d| < 0.2 deg in stage 1",
                             m.stage1_max_sigma_error < deg2rad(0.2),
                             fmt(rad2deg(m.stage1_max_sigma_error)) + " deg"));
        const double prev = results[i - 1].metrics.realized_switch_time.value_or(std::nan(""));
        out.push_back(expect(m.label + ": switch later than previous", sw > prev, fmt(prev) + " -> " + fmt(sw)));
      }
    }
    return out;
  };
  return s;
}

ReferenceSuite case5() {
  ReferenceSuite s{"case5-autopilot", "second-order autopilot (0.56 s, 0.1 s), t_d = 42/50 s", {}, {}};
  auto a = reference_scenario("autopilot-td-42", 60.0, 42.0);
  auto b = reference_scenario("autopilot-td-50", 60.0, 50.0, Law::multi_stage);
  for (auto* c : {&a, &b}) c->actuator.autopilot.order = AutopilotOrder::second;
  s.scenarios = {a, b};
  const auto cfgs = s.scenarios;
  s.check = [cfgs](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    for (std::size_t i = 0; i < results.size(); ++i) check_timing(out, results[i], cfgs[i].t_d, 10.0, 0.5);
    return out;
  };
  return s;
}

ReferenceSuite case6() {
  ReferenceSuite s{"case6-noise", "t_d = 42 s under seeker noise with alpha-beta filtering, 20 seeds", {}, {}};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = reference_scenario("noise-seed-" + std::to_string(seed), 60.0, 42.0);
    NoiseConfig n;
    n.seed = seed;
    c.noise = n;
    c.gains.png_handover = 1.0;
    s.scenarios.push_back(c);
  }
  s.check = [](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    int ok = 0;
    double worst_rms = 0.0;
    for (const auto& r : results) {
      const auto& m = r.metrics;
      ok += m.success() && m.miss_distance < 10.0 && std::abs(m.impact_time - 42.0) < 0.5;
      worst_rms = std::max({worst_rms, m.filtered_los_rms, m.filtered_heading_rms});
    }
    out.push_back(expect("at least 18 of 20 seeds intercept within 10 m and 0.5 s", ok >= 18,
                         std::to_string(ok) + " of " + std::to_string(results.size())));
    out.push_back(expect("post-transient filtered angle RMS < 15 mrad", worst_rms < 0.015,
                         "worst " + fmt(worst_rms * 1e3) + " mrad"));
    return out;
  };
  return s;
}

ReferenceSuite table1() {
  ReferenceSuite s{"table1-proposed", "control effort: t_d = 41/42/43 s at 60 deg, and 20/40/60 deg at 42 s", {}, {}};
  for (double t_d : {41.0, 42.0, 43.0}) s.scenarios.push_back(reference_scenario("case1-td-" + fmt(t_d), 60.0, t_d));
  for (double sigma0 : {20.0, 40.0, 60.0}) {
    s.scenarios.push_back(reference_scenario("case2-sigma0-" + fmt(sigma0), sigma0, 42.0));
  }
  s.check = [](std::span<const RunResult> results) {
    std::vector<SuiteCheck> out;
    for (const auto& r : results) {
      out.push_back(expect(r.metrics.label + ": intercepts", r.metrics.success(), to_string(r.metrics.status)));
    }
    const auto J = [&](std::size_t i) { return results[i].metrics.control_effort; };
    out.push_back(expect("case 1 effort strictly decreasing in t_d", J(0) > J(1) && J(1) > J(2),
                         fmt(J(0), 6) + " > " + fmt(J(1), 6) + " > " + fmt(J(2), 6)));
    out.push_back(expect("case 2 effort minimal at 40 deg", J(4) < J(3) && J(4) < J(5),
                         fmt(J(3), 6) + ", " + fmt(J(4), 6) + ", " + fmt(J(5), 6)));
    out.push_back(expect("effort at t_d = 42 s within [4500, 18000]", J(1) >= 4500.0 && J(1) <= 18000.0,
                         fmt(J(1), 6)));
    return out;
  };
  return s;
}

}  // namespace

ScenarioConfig reference_scenario(std::string label, double sigma0_deg, double t_d, Law law) {
  ScenarioConfig c;
  c.label = std::move(label);
  c.r0 = 10000.0;
  c.V_M = 250.0;
  c.theta_L0 = 0.0;
  c.gamma_M0 = deg2rad(sigma0_deg);
  c.t_d = t_d;
  c.law = law;
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"case1-headings", "case2-impact-times", "case3-amax",
                                              "case4-large-td", "case5-autopilot",    "case6-noise",
                                              "table1-proposed"};
  return names;
}

ReferenceSuite reference_suite(std::string_view name) {
  if (name == "case1-headings") return case1();
  if (name == "case2-impact-times") return case2();
  if (name == "case3-amax") return case3();
  if (name == "case4-large-td") return case4();
  if (name == "case5-autopilot") return case5();
  if (name == "case6-noise") return case6();
  if (name == "table1-proposed") return table1();
  std::string msg = "unknown suite '" + std::string(name) + "'; valid suites:";
  for (const auto& n : suite_names()) msg += " " + n;
  throw ConfigError(msg);
}

}  // namespace itg
