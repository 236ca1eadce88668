#pragma once

// Bundled reproductions of the reference case studies, each with the checks
// it is expected to pass.

#include <itg/runner.hpp>

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itg {

struct SuiteCheck {
  std::string name;
  bool passed{false};
  std::string detail;
};

struct ReferenceSuite {
  std::string name;
  std::string description;
  std::vector<ScenarioConfig> scenarios;
  std::function<std::vector<SuiteCheck>(std::span<const RunResult>)> check;
};

/// Reference engagement: r0 = 10 km, V_M = 250 m/s, theta_L0 = 0, default gains.
ScenarioConfig reference_scenario(std::string label, double sigma0_deg, double t_d, Law law = Law::blf);

const std::vector<std::string>& suite_names();

/// Throws ConfigError listing the valid names for an unknown suite.
ReferenceSuite reference_suite(std::string_view name);

}  // namespace itg
