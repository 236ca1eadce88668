#pragma once

// Scenario configuration files (JSON) and experiment suites.
//
// Top-level sections engagement, gains, actuator, noise and run give the
// defaults; an optional "scenarios" array overrides them per scenario. Angles
// (theta_L0, gamma_M0, sigma_max, sigma_d) are in degrees; the same keys with
// a "_rad" suffix take radians and are what the serializer emits, so that
// parse -> serialize -> parse is exact.

#include <itg/runner.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace itg {

struct ExpectedCheck {
  std::string scenario;
  std::string metric;
  double value{};
  double tolerance{};

  bool operator==(const ExpectedCheck&) const = default;
};

struct ExperimentSuite {
  std::string name{"suite"};
  std::vector<ScenarioConfig> scenarios;
  std::vector<ExpectedCheck> expected;

  bool operator==(const ExperimentSuite&) const = default;
};

/// Parses and validates. Errors are ConfigError with
/// "<source>:<line>: <key path>: <constraint>".
ExperimentSuite parse_config_text(std::string_view text, const std::string& source = "<config>");
ExperimentSuite parse_config(const std::filesystem::path& path);

std::string serialize_config(const ExperimentSuite& suite);

Law parse_law(std::string_view s);
AutopilotOrder parse_autopilot_order(std::string_view s);
const char* to_string(AutopilotOrder order);

/// Numeric view of a metric by field name (flags map to 0/1). Throws
/// ConfigError for unknown names.
double metric_value(const RunMetrics& m, std::string_view metric);
bool is_known_metric(std::string_view metric);

struct CheckOutcome {
  ExpectedCheck check;
  double actual{};
  bool passed{false};
  std::string note;
};

std::vector<CheckOutcome> evaluate_checks(const ExperimentSuite& suite, std::span<const RunMetrics> metrics);

}  // namespace itg
