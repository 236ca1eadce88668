#include <itg/runner.hpp>

#include <itg/kinematics.hpp>
#include <itg/timing.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace itg {

namespace {

constexpr double kRhoSettle = 0.01;       // s
constexpr double kTerminalWindow = 0.5;   // s
constexpr double kFilterTransient = 5.0;  // s

struct RangeSample {
  double t;
  double r;
};

EngagementState<double> unpack(const JointVector<double>& y, double t) {
  return {y(kRange), y(kLos), y(kLead), y(kPosX), y(kPosY), t};
}

ActuatorChainState<double> chain_of(const JointVector<double>& y) { return {y(kAccel), y(kLag1), y(kLag2)}; }

}  // namespace

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::intercepted: return "intercepted";
    case RunStatus::timeout: return "timeout";
    case RunStatus::aborted: return "aborted";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  auto fail = [&](const std::string& what) { throw ConfigError("scenario '" + label + "': " + what); };
  if (label.empty()) fail("label must not be empty");
  if (!(r0 > 0.0)) fail("r0 must be positive");
  if (!(V_M > 0.0)) fail("V_M must be positive");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(r_lethal > 0.0)) fail("r_lethal must be positive");
  if (!(r_lethal < r0)) fail("r_lethal must be below r0");
  if (!(t_d > 0.0)) fail("t_d must be positive");
  if (!(horizon() > t_d)) fail("t_max must exceed t_d");
  if (log_every < 1) fail("log_every must be at least 1");
  if (!std::isfinite(theta_L0) || !std::isfinite(gamma_M0)) fail("initial angles must be finite");
  try {
    gains.validate();
    actuator.validate();
    if (noise) noise->validate();
  } catch (const ConfigError& e) {
    fail(e.what());
  }
  if (noise) {
    const double steps = 1.0 / (noise->sample_rate * dt);
    if (std::abs(steps - std::round(steps)) > 1e-9 || std::round(steps) < 1.0) {
      fail("noise sample period must be an integer multiple of dt");
    }
  }
  if (law == Law::blf || law == Law::multi_stage) {
    if (!(std::abs(sigma0()) < gains.sigma_max)) fail("initial lead angle violates the field-of-view bound sigma_max");
  }
  const auto tg = gains.timing();
  if (law == Law::blf && !single_stage_feasible(t_d, r0, V_M, gains.sigma_max, tg)) {
    const auto [lo, hi] = feasibility_window(r0, V_M, gains.sigma_max, tg);
    std::ostringstream os;
    os << std::setprecision(6) << "t_d = " << t_d << " s lies outside the single-stage window (" << lo << ", "
       << hi << ") s; use law multi_stage for larger impact times";
    fail(os.str());
  }
  if (law == Law::multi_stage) {
    const double lo = r0 / V_M;
    const double hi = max_achievable_impact_time(r0, V_M, gains.sigma_max);
    if (!(t_d > lo) || !(t_d < hi)) {
      std::ostringstream os;
      os << std::setprecision(6) << "t_d = " << t_d << " s lies outside the achievable range (" << lo << ", "
         << hi << ") s";
      fail(os.str());
    }
  }
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  RunResult result;
  RunMetrics& m = result.metrics;
  m.label = cfg.label;

  const double V = cfg.V_M;
  const auto& act = cfg.actuator;
  const auto& gains = cfg.gains;
  const auto tg = gains.timing();
  const bool baseline = is_baseline(cfg.law);
  const double horizon = cfg.horizon();

  if (cfg.law == Law::multi_stage) {
    m.analytic_switch_time =
        switching_time_t1(cfg.r0, gains.sigma_d, V, cfg.t_d, tg.kappa(), gains.epsilon_t1);
  }

  JointVector<double> y = JointVector<double>::Zero();
  y(kRange) = cfg.r0;
  y(kLos) = cfg.theta_L0;
  y(kLead) = cfg.sigma0();

  GuidanceContext<double> ctx(cfg.law, gains, act, V, cfg.t_d);
  std::optional<SensorPipeline> sensors;
  long sample_every = 1;
  if (cfg.noise) {
    sensors.emplace(*cfg.noise);
    sample_every = std::lround(1.0 / (cfg.noise->sample_rate * cfg.dt));
  }

  auto trace = [&](StepPhase phase, long step) {
    if (options.trace) options.trace(phase, step);
  };

  // Ideal-actuator acceleration for baseline laws as a function of the
  // (true) state; in noisy runs the held command is used instead.
  std::optional<double> held_baseline;
  auto baseline_accel = [&](const EngagementState<double>& s) {
    if (held_baseline) return *held_baseline;
    const double raw = cfg.law == Law::png ? png_command(s, V, gains.N) : deviated_pursuit_command(s, V);
    return std::clamp(raw, -act.a_max, act.a_max);
  };

  EngagementState<double> perceived{};
  double blf_start = std::numeric_limits<double>::quiet_NaN();
  double V0 = 0.0;
  const double kappa_p = std::min(gains.p * gains.kappa1_bar, gains.kappa3_bar);
  const double kappa_p_alt = gains.p * gains.kappa1_bar;
  double last_rho_outside = 0.0;
  bool rho_ever_outside = false;
  std::deque<std::pair<double, std::pair<double, double>>> window;  // t, (|sigma|, |a_M|)
  double a_prev = 0.0;
  bool reached_sigma_d = false;
  double los_sq = 0.0, heading_sq = 0.0;
  long filter_samples = 0;
  std::vector<RangeSample> ranges;
  ranges.reserve(static_cast<std::size_t>(horizon / cfg.dt) + 2);

  long step = 0;
  double t = 0.0;
  try {
    for (;;) {
      t = static_cast<double>(step) * cfg.dt;
      const EngagementState<double> truth = unpack(y, t);
      ranges.push_back({t, truth.r});
      if (baseline && !sensors) y(kAccel) = baseline_accel(truth);
      const double a_M = y(kAccel);
      if (step == 0) a_prev = a_M;

      // (1) sensors
      trace(StepPhase::sense, step);
      if (sensors) {
        if (step % sample_every == 0) {
          const auto sensed = sensors->update(truth);
          perceived = sensed.state;
          if (t > kFilterTransient) {
            const double e_los = sensed.state.theta_L - truth.theta_L;
            const double e_heading = sensed.gamma_M - truth.heading();
            los_sq += e_los * e_los;
            heading_sq += e_heading * e_heading;
            ++filter_samples;
          }
        }
      } else {
        perceived = truth;
      }

      // (2) timing errors on the true state for logging and invariant checks
      trace(StepPhase::errors, step);
      const auto errs = error_terms(truth, t, cfg.t_d, gains.sigma_max, V, tg);

      // (3) command
      trace(StepPhase::command, step);
      const auto out = ctx.update(perceived, a_M);
      if (baseline && sensors) {
        held_baseline = out.command;
        y(kAccel) = out.command;
      }
      const double a_c = baseline ? y(kAccel) : out.command;

      // bookkeeping and invariant latches
      const double a_now = y(kAccel);
      m.peak_abs_a_M = std::max(m.peak_abs_a_M, std::abs(a_now));
      m.peak_abs_sigma = std::max(m.peak_abs_sigma, std::abs(truth.sigma));
      m.peak_abs_a_M_c = std::max(m.peak_abs_a_M_c, std::abs(out.raw_command));
      if (!(std::abs(a_now) < act.a_max)) m.actuator_violated = true;
      if (std::abs(truth.sigma) > gains.sigma_max) m.fov_violated = true;
      m.command_clamped = m.command_clamped || out.clamped;
      m.barrier_degenerate = m.barrier_degenerate || out.degenerate;
      m.past_desired_time = m.past_desired_time || errs.past_desired;
      if (out.switched) {
        m.switch_tgo_mismatch = std::abs(errs.t_go_d - errs.t_go_max);
      }
      if (out.diag.active_stage == ActiveStage::hold) reached_sigma_d = true;
      if (reached_sigma_d && out.phase == 1 && !out.switched) {
        const double e = std::abs(truth.sigma - gains.sigma_d);
        m.stage1_max_sigma_error = std::isnan(m.stage1_max_sigma_error) ? e : std::max(m.stage1_max_sigma_error, e);
      }
      const bool in_blf = !baseline && out.phase == 2;
      double rho_L = 0, rho_U = 0, rho_L_alt = 0, rho_U_alt = 0;
      if (in_blf) {
        if (!errs.inside_barrier()) m.barrier_violated = true;
        if (std::isnan(blf_start)) {
          blf_start = t;
          V0 = blf_lyapunov(errs.rho, errs.rho1, errs.rho2, a_M - out.diag.alpha1, gains.p);
        }
        std::tie(rho_L, rho_U) = barrier_envelope(errs.rho1, errs.rho2, V0, kappa_p, gains.p, t - blf_start);
        std::tie(rho_L_alt, rho_U_alt) =
            barrier_envelope(errs.rho1, errs.rho2, V0, kappa_p_alt, gains.p, t - blf_start);
        if (std::isfinite(V0) && (errs.rho < rho_L - 1e-9 || errs.rho > rho_U + 1e-9)) m.envelope_exceeded = true;
      }
      if (std::abs(errs.rho) > kRhoSettle) {
        last_rho_outside = t;
        rho_ever_outside = true;
      }
      window.push_back({t, {std::abs(truth.sigma), std::abs(a_now)}});
      while (!window.empty() && window.front().first < t - kTerminalWindow - 1e-12) window.pop_front();

      // (4) integrate with a_M^c held over the step
      trace(StepPhase::integrate, step);
      const double r_now = y(kRange);
      const bool terminal = r_now <= cfg.r_lethal || r_now <= 2.0 * V * cfg.dt;
      JointVector<double> next = y;
      if (!terminal) {
        auto rhs = [&](double tau, const JointVector<double>& z) {
          JointVector<double> d = JointVector<double>::Zero();
          const auto s = unpack(z, tau);
          const auto chain = chain_of(z);
          double a_M_d = 0.0;
          if (baseline) {
            a_M_d = baseline_accel(s);
          } else {
            a_M_d = chain.a_M;
            d(kAccel) = saturation_rhs(chain.a_M, a_c, act.a_max, act.n, act.rho);
          }
          const auto lag = autopilot_rhs(chain, act.autopilot, a_M_d);
          d(kLag1) = lag(0);
          d(kLag2) = lag(1);
          const double a_ach = act.autopilot.order == AutopilotOrder::none ? a_M_d
                                                                           : achieved_acceleration(chain, act.autopilot);
          const auto k = dynamics_rhs(s, a_ach, V);
          d(kRange) = k.r_dot;
          d(kLos) = k.theta_L_dot;
          d(kLead) = k.sigma_dot;
          d(kPosX) = k.x_dot;
          d(kPosY) = k.y_dot;
          return d;
        };
        next = rk4_step(y, t, cfg.dt, rhs);
      }

      // (5) log
      trace(StepPhase::log, step);
      if (options.keep_trajectory && (step % cfg.log_every == 0 || terminal)) {
        result.trajectory.push_back({t, truth.r, truth.theta_L, truth.sigma, truth.x, truth.y, a_c, a_now,
                                     act.autopilot.order == AutopilotOrder::none
                                         ? a_now
                                         : achieved_acceleration(chain_of(y), act.autopilot),
                                     errs.rho, errs.rho1, errs.rho2, errs.t_go, out.diag.s_surface, out.phase});
      }
      if (options.keep_diagnostics && (step % cfg.log_every == 0 || terminal)) {
        const auto& d = out.diag;
        result.diagnostics.push_back({t, d.alpha1, d.alpha1_dot, d.mu, d.kappa2_bar, d.z2_bar, d.F_p, d.G_p, rho_L,
                                      rho_U, rho_L_alt, rho_U_alt, d.active_stage});
      }

      if (terminal) {
        // Unforced straight-line extrapolation from the first sample inside
        // the lethal radius: r^2(tau) = r^2 - 2 r V cos(sigma) tau + V^2 tau^2.
        const double c = std::cos(truth.sigma);
        const double tau = std::max(0.0, truth.r * c / V);
        m.impact_time = t + tau;
        m.miss_distance = c > 0.0 ? truth.r * std::abs(std::sin(truth.sigma)) : truth.r;
        m.miss_distance = std::min(m.miss_distance, miss_distance(ranges));
        m.control_effort += a_now * a_now * tau;
        m.status = RunStatus::intercepted;
        m.terminal_sigma = truth.sigma;
        m.terminal_a_M = a_now;
        break;
      }

      y = next;
      ++step;
      const double a_next = baseline && !sensors ? baseline_accel(unpack(y, step * cfg.dt)) : y(kAccel);
      m.control_effort += 0.5 * (a_prev * a_prev + a_next * a_next) * cfg.dt;
      a_prev = a_next;

      if (static_cast<double>(step) * cfg.dt >= horizon) {
        const auto last = unpack(y, static_cast<double>(step) * cfg.dt);
        m.status = RunStatus::timeout;
        m.terminal_sigma = last.sigma;
        m.terminal_a_M = y(kAccel);
        ranges.push_back({last.t, last.r});
        m.miss_distance = miss_distance(ranges);
        m.diagnostic = "no interception before t_max";
        break;
      }
    }
  } catch (const SimulationError& e) {
    m.status = RunStatus::aborted;
    m.diagnostic = e.what();
    m.terminal_sigma = y(kLead);
    m.terminal_a_M = y(kAccel);
    m.miss_distance = ranges.empty() ? y(kRange) : miss_distance(ranges);
  }

  m.realized_switch_time = ctx.switch_time();
  if (filter_samples > 0) {
    m.filtered_los_rms = std::sqrt(los_sq / static_cast<double>(filter_samples));
    m.filtered_heading_rms = std::sqrt(heading_sq / static_cast<double>(filter_samples));
  }
  if (!window.empty()) {
    m.terminal_window_abs_sigma = 0.0;
    m.terminal_window_abs_a_M = 0.0;
    for (const auto& [tw, v] : window) {
      m.terminal_window_abs_sigma = std::max(m.terminal_window_abs_sigma, v.first);
      m.terminal_window_abs_a_M = std::max(m.terminal_window_abs_a_M, v.second);
    }
  }
  m.rho_settle_time = rho_ever_outside ? last_rho_outside + cfg.dt : 0.0;
  return result;
}

std::vector<RunResult> run_batch_results(std::span<const ScenarioConfig> cfgs, unsigned workers,
                                         const RunOptions& options) {
  std::set<std::string> labels;
  for (const auto& c : cfgs) {
    if (!labels.insert(c.label).second) throw ConfigError("duplicate scenario label '" + c.label + "'");
  }
  std::vector<RunResult> results(cfgs.size());
  auto run_one = [&](std::size_t i) {
    try {
      results[i] = run_scenario(cfgs[i], options);
    } catch (const std::exception& e) {
      results[i] = {};
      results[i].metrics.label = cfgs[i].label;
      results[i].metrics.status = RunStatus::aborted;
      results[i].metrics.diagnostic = e.what();
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cfgs.size())));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < cfgs.size(); ++i) run_one(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cfgs.size(); i = next++) run_one(i);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

std::vector<RunMetrics> run_batch(std::span<const ScenarioConfig> cfgs, unsigned workers) {
  RunOptions options;
  options.keep_diagnostics = false;
  auto results = run_batch_results(cfgs, workers, options);
  std::vector<RunMetrics> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(r.metrics));
  return out;
}

EffortTable effort_table(std::span<const RunMetrics> metrics) {
  EffortTable table;
  std::ostringstream csv;
  csv << "label,status,impact_time,miss_distance,control_effort\n";
  std::size_t width = 8;
  for (const auto& m : metrics) width = std::max(width, m.label.size());

  std::ostringstream txt;
  txt << std::left << std::setw(static_cast<int>(width)) << "scenario" << std::right << std::setw(14)
      << "impact_time" << std::setw(12) << "miss" << std::setw(16) << "control_effort" << '\n';
  txt << std::string(width + 42, '-') << '\n';
  for (const auto& m : metrics) {
    csv << m.label << ',' << to_string(m.status) << ',';
    txt << std::left << std::setw(static_cast<int>(width)) << m.label << std::right;
    if (m.success()) {
      csv << std::setprecision(17) << m.impact_time;
      txt << std::fixed << std::setprecision(3) << std::setw(14) << m.impact_time;
    } else {
      txt << std::setw(14) << to_string(m.status);
    }
    csv << ',' << std::setprecision(17) << m.miss_distance << ',' << m.control_effort << '\n';
    txt << std::fixed << std::setprecision(3) << std::setw(12) << m.miss_distance << std::setprecision(1)
        << std::setw(16) << m.control_effort << '\n';
    txt.unsetf(std::ios::fixed);
  }
  table.csv = csv.str();
  table.text = txt.str();
  return table;
}

}  // namespace itg
