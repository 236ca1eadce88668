#pragma once

// Scenario orchestration: guidance -> saturation model -> autopilot ->
// kinematics, interception detection, metrics and trajectory logging.

#include <itg/actuator.hpp>
#include <itg/guidance.hpp>
#include <itg/sensing.hpp>
#include <itg/types.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itg {

struct ScenarioConfig {
  std::string label{"scenario"};
  double r0{10000.0};
  double theta_L0{0.0};
  double gamma_M0{deg2rad(60.0)};
  double V_M{250.0};
  double t_d{42.0};
  Law law{Law::blf};
  GuidanceGains<double> gains{};
  ActuatorConfig<double> actuator{};
  std::optional<NoiseConfig> noise{};
  double dt{1e-3};
  std::optional<double> t_max{};  // defaults to t_d + 10 s
  double r_lethal{1.0};
  int log_every{100};  // integration steps per trajectory row

  double sigma0() const { return gamma_M0 - theta_L0; }
  double horizon() const { return t_max.value_or(t_d + 10.0); }

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

enum class RunStatus { intercepted, timeout, aborted };

const char* to_string(RunStatus status);

struct RunMetrics {
  std::string label;
  RunStatus status{RunStatus::aborted};
  double impact_time{std::numeric_limits<double>::quiet_NaN()};
  double miss_distance{std::numeric_limits<double>::quiet_NaN()};
  double control_effort{0.0};  // integral of a_M^2, m^2/s^3
  double peak_abs_a_M{0.0};
  double peak_abs_sigma{0.0};
  bool barrier_violated{false};
  bool fov_violated{false};
  bool actuator_violated{false};
  std::optional<double> realized_switch_time{};
  double terminal_sigma{std::numeric_limits<double>::quiet_NaN()};
  double terminal_a_M{std::numeric_limits<double>::quiet_NaN()};
  // Additional diagnostics.
  double peak_abs_a_M_c{0.0};
  double terminal_window_abs_sigma{std::numeric_limits<double>::quiet_NaN()};  // max over final 0.5 s
  double terminal_window_abs_a_M{std::numeric_limits<double>::quiet_NaN()};
  double rho_settle_time{std::numeric_limits<double>::quiet_NaN()};  // |rho| <= 0.01 s from here on
  double switch_tgo_mismatch{std::numeric_limits<double>::quiet_NaN()};  // |t_go^d - t_go^M| at the switch
  double analytic_switch_time{std::numeric_limits<double>::quiet_NaN()};
  double stage1_max_sigma_error{std::numeric_limits<double>::quiet_NaN()};  // |sigma - sigma_d| while holding
  bool command_clamped{false};
  bool barrier_degenerate{false};
  bool envelope_exceeded{false};
  bool past_desired_time{false};
  // Noisy runs: RMS of filtered minus true angle over samples after t = 5 s.
  double filtered_los_rms{std::numeric_limits<double>::quiet_NaN()};
  double filtered_heading_rms{std::numeric_limits<double>::quiet_NaN()};
  std::string diagnostic{};

  bool success() const { return status == RunStatus::intercepted; }
  bool operator==(const RunMetrics&) const = default;
};

/// One logged row; column names are part of the trajectory CSV format.
struct TrajectoryRecord {
  double t{};
  double r{};
  double theta_L{};
  double sigma{};
  double x{};
  double y{};
  double a_M_c{};
  double a_M{};
  double a_M_achieved{};
  double rho{};
  double rho1{};
  double rho2{};
  double t_go{};
  double s_surface{};
  int stage{};

  bool operator==(const TrajectoryRecord&) const = default;
};

/// Guidance internals logged alongside the trajectory.
struct DiagnosticRecord {
  double t{};
  double alpha1{};
  double alpha1_dot{};
  double mu{};
  double kappa2_bar{};
  double z2_bar{};
  double F_p{};
  double G_p{};
  double rho_L{};  // envelope with exponent min(p kappa1, kappa3)
  double rho_U{};
  double rho_L_alt{};  // envelope with exponent p kappa1
  double rho_U_alt{};
  ActiveStage active_stage{ActiveStage::blf};
};

struct RunResult {
  RunMetrics metrics;
  std::vector<TrajectoryRecord> trajectory;
  std::vector<DiagnosticRecord> diagnostics;
};

enum class StepPhase { sense, errors, command, integrate, log };

struct RunOptions {
  /// Called at each phase of every integration step (test harness hook).
  std::function<void(StepPhase, long step)> trace{};
  bool keep_trajectory{true};
  bool keep_diagnostics{true};
};

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Runs scenarios independently on up to `workers` threads. Results keep
/// input order and are identical to serial execution. A scenario that throws
/// is reported as aborted without affecting the others.
std::vector<RunResult> run_batch_results(std::span<const ScenarioConfig> cfgs, unsigned workers,
                                         const RunOptions& options = {});

std::vector<RunMetrics> run_batch(std::span<const ScenarioConfig> cfgs, unsigned workers);

struct EffortTable {
  std::string csv;
  std::string text;
};

EffortTable effort_table(std::span<const RunMetrics> metrics);

}  // namespace itg
