#pragma once

// Guidance laws producing the commanded lateral acceleration a_M^c:
//  - barrier-Lyapunov backstepping law on the impact-time error,
//  - finite-time sliding-mode lead-angle capture followed by deviated pursuit,
//    composed with the former into a two-stage law for large impact times,
//  - proportional navigation and deviated pursuit baselines.

#include <itg/actuator.hpp>
#include <itg/kinematics.hpp>
#include <itg/timing.hpp>
#include <itg/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace itg {

enum class Law { blf, multi_stage, png, deviated_pursuit };

enum class ActiveStage { blf, sliding, hold, clamped, baseline, terminal };

inline const char* to_string(Law law) {
  switch (law) {
    case Law::blf: return "blf";
    case Law::multi_stage: return "multi_stage";
    case Law::png: return "png";
    case Law::deviated_pursuit: return "deviated_pursuit";
  }
  return "?";
}

inline const char* to_string(ActiveStage stage) {
  switch (stage) {
    case ActiveStage::blf: return "blf";
    case ActiveStage::sliding: return "sliding";
    case ActiveStage::hold: return "hold";
    case ActiveStage::clamped: return "clamped";
    case ActiveStage::baseline: return "baseline";
    case ActiveStage::terminal: return "terminal";
  }
  return "?";
}

/// Laws evaluated as static state feedback with an ideal actuator instead of
/// driving the saturation model.
inline bool is_baseline(Law law) { return law == Law::png || law == Law::deviated_pursuit; }

template <typename Scalar>
struct GuidanceGains {
  Scalar kappa1_bar{1};
  Scalar kappa3_bar{1};
  Scalar beta_bar{1};
  int p{1};
  Scalar N{3};
  Scalar sigma_max{deg2rad(Scalar(80))};
  Scalar xi{1};
  int p_f{11};
  int q_f{9};
  Scalar c{1000};
  Scalar sigma_d{deg2rad(Scalar(65))};
  Scalar epsilon_t1{0.01};
  Scalar boundary_layer{0.01};
  Scalar hold_gain{10};  // 1/s, rate at which a_M is pulled onto V_M * LOS rate while holding sigma_d
  Scalar terminal_hold{0.05};  // s; a_M is frozen once r / V_M drops below this
  Scalar png_handover{0};      // s; proportional navigation replaces the backstepping law below this r / V_M (0 = off)

  TimingGains<Scalar> timing() const { return TimingGains<Scalar>(N); }

  void validate() const {
    if (!(kappa1_bar > 0)) throw ConfigError("kappa1_bar must be positive");
    if (!(kappa3_bar > 0)) throw ConfigError("kappa3_bar must be positive");
    if (!(beta_bar > 0)) throw ConfigError("beta_bar must be positive");
    if (p < 1) throw ConfigError("p must be a positive integer");
    if (!(N > 1)) throw ConfigError("navigation constant N must exceed 1");
    if (!(sigma_max > 0) || !(sigma_max < std::numbers::pi_v<Scalar> / 2)) {
      throw ConfigError("sigma_max must lie in (0, 90) degrees");
    }
    if (!(xi > 0)) throw ConfigError("xi must be positive");
    if (p_f <= 0 || p_f % 2 == 0) throw ConfigError("p_f must be odd: p_f and q_f are odd positive integers");
    if (q_f <= 0 || q_f % 2 == 0) throw ConfigError("q_f must be odd: p_f and q_f are odd positive integers");
    if (!(p_f > q_f) || !(p_f < 2 * q_f)) {
      throw ConfigError("p_f and q_f must satisfy 1 < p_f/q_f < 2");
    }
    if (!(c > 0)) throw ConfigError("reaching gain c must be positive");
    if (!(sigma_d < sigma_max)) throw ConfigError("sigma_d must be below sigma_max");
    if (!(epsilon_t1 >= 0)) throw ConfigError("epsilon_t1 must be non-negative");
    if (!(boundary_layer >= 0)) throw ConfigError("boundary_layer must be non-negative");
    if (!(hold_gain > 0)) throw ConfigError("hold_gain must be positive");
    if (!(terminal_hold >= 0)) throw ConfigError("terminal_hold must be non-negative");
    if (!(png_handover >= 0)) throw ConfigError("png_handover must be non-negative");
  }

  bool operator==(const GuidanceGains&) const = default;
};

template <typename Scalar>
struct GuidanceDiagnostics {
  Scalar alpha1{};
  Scalar alpha1_dot{};
  Scalar mu{};
  Scalar kappa2_bar{};
  Scalar z2_bar{};
  Scalar s_surface{};
  Scalar F_p{};
  Scalar G_p{};
  ActiveStage active_stage{ActiveStage::blf};
};

// ---------------------------------------------------------------------------
// Impact-time error dynamics: d(rho)/dt = F_p + G_p a_M

template <typename Scalar>
struct ErrorDynamics {
  Scalar F_p{};
  Scalar G_p{};
};

template <typename Scalar>
ErrorDynamics<Scalar> error_dynamics_terms(const EngagementState<Scalar>& state, Scalar V_M, Scalar kappa) {
  using std::cos;
  using std::sin;
  if (!(state.r > 0)) throw DomainError("error_dynamics_terms: r must be positive");
  const Scalar s = sin(state.sigma);
  const Scalar h = sin(state.sigma / Scalar(2));
  return {Scalar(2) * h * h + cos(state.sigma) * s * s / kappa,
          state.r * sin(Scalar(2) * state.sigma) / (kappa * V_M * V_M)};
}

/// |sin 2 sigma| below this makes G_p singular; alpha1 and its rate are then
/// replaced by their limit 0.
inline constexpr double kSigmaSingularity = 1e-4;
/// Barrier magnitudes below this are treated as degenerate in kappa2_bar.
inline constexpr double kBarrierDegenerate = 1e-9;
/// Saturation margins below this hold the previous command.
inline constexpr double kMarginGuard = 1e-6;

template <typename Scalar>
bool sigma_singular(Scalar sigma) {
  using std::abs;
  using std::sin;
  return abs(sin(Scalar(2) * sigma)) < Scalar(kSigmaSingularity);
}

template <typename Scalar>
struct BarrierRatios {
  Scalar upper{};  // rho1_dot / rho1
  Scalar lower{};  // rho2_dot / rho2
};

template <typename Scalar>
struct Kappa2 {
  Scalar value{};
  BarrierRatios<Scalar> ratios{};
  bool degenerate{false};
};

/// sqrt(beta + (rho1_dot/rho1)^2 + (rho2_dot/rho2)^2). A ratio whose barrier is
/// numerically zero is replaced by `last_finite`.
template <typename Scalar>
Kappa2<Scalar> kappa2_bar(const ErrorTerms<Scalar>& e, Scalar beta_bar,
                          const BarrierRatios<Scalar>& last_finite = {}) {
  using std::abs;
  using std::sqrt;
  Kappa2<Scalar> k;
  k.ratios = last_finite;
  if (abs(e.rho1) >= Scalar(kBarrierDegenerate)) {
    k.ratios.upper = e.rho1_dot / e.rho1;
  } else {
    k.degenerate = true;
  }
  if (abs(e.rho2) >= Scalar(kBarrierDegenerate)) {
    k.ratios.lower = e.rho2_dot / e.rho2;
  } else {
    k.degenerate = true;
  }
  k.value = sqrt(beta_bar + k.ratios.upper * k.ratios.upper + k.ratios.lower * k.ratios.lower);
  return k;
}

/// Stabilizing function for the virtual control a_M.
template <typename Scalar>
Scalar alpha1(Scalar F_p, Scalar G_p, Scalar rho, Scalar kappa1_bar, Scalar kappa2_bar) {
  return (-F_p - (kappa1_bar + kappa2_bar) * rho) / G_p;
}

template <typename Scalar>
struct MuValue {
  Scalar value{};
  bool violated{false};
};

namespace detail {

// bound^{2p} - rho^{2p} written as (bound - rho) * sum_k bound^k rho^{2p-1-k},
// with bound - rho supplied directly.
template <typename Scalar>
Scalar barrier_power_gap(Scalar bound, Scalar rho, Scalar diff, int p) {
  Scalar sum = 0;
  Scalar bk = 1;
  for (int k = 0; k < 2 * p; ++k) {
    Scalar term = bk;
    for (int j = 0; j < 2 * p - 1 - k; ++j) term *= rho;
    sum += term;
    bk *= bound;
  }
  return diff * sum;
}

}  // namespace detail

/// Barrier gain mu = q/(rho1^2p - rho^2p) + (1-q)/(rho2^2p - rho^2p), q = [rho > 0].
/// `gap_upper` = rho1 - rho and `gap_lower` = rho - rho2.
template <typename Scalar>
MuValue<Scalar> mu(Scalar rho, Scalar rho1, Scalar rho2, int p, Scalar gap_upper, Scalar gap_lower) {
  using std::pow;
  const bool q = rho > Scalar(0);
  const Scalar bound = q ? rho1 : rho2;
  const Scalar diff = q ? gap_upper : -gap_lower;  // bound - rho
  const bool inside = q ? (gap_upper > 0 && rho1 > 0) : (gap_lower > 0 && rho2 < 0);
  MuValue<Scalar> out;
  Scalar denom;
  if (inside) {
    denom = detail::barrier_power_gap(bound, rho, diff, p);
  } else {
    out.violated = true;
    denom = pow(bound, 2 * p) * (Scalar(1) - pow(Scalar(0.999), 2 * p));
  }
  if (!(denom > std::numeric_limits<Scalar>::min())) {
    denom = std::numeric_limits<Scalar>::min();
  }
  out.value = Scalar(1) / denom;
  return out;
}

template <typename Scalar>
MuValue<Scalar> mu(Scalar rho, Scalar rho1, Scalar rho2, int p) {
  return mu(rho, rho1, rho2, p, rho1 - rho, rho - rho2);
}

template <typename Scalar>
MuValue<Scalar> mu(const ErrorTerms<Scalar>& e, int p) {
  return mu(e.rho, e.rho1, e.rho2, p, e.gap_upper, e.gap_lower);
}

/// Total time derivative of alpha1 along the closed-loop flow, by the chain
/// rule through sigma, r, rho and the gain K = kappa1_bar + kappa2_bar.
/// `K_dot` is the (externally estimated) rate of kappa2_bar.
template <typename Scalar>
Scalar alpha1_dot(const EngagementState<Scalar>& state, Scalar V_M, Scalar kappa, Scalar rho, Scalar K,
                  Scalar K_dot, Scalar a_M) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(state.sigma);
  const Scalar c = cos(state.sigma);
  const Scalar s2 = sin(Scalar(2) * state.sigma);
  const Scalar c2 = cos(Scalar(2) * state.sigma);
  const Scalar V2 = V_M * V_M;

  const Scalar h = sin(state.sigma / Scalar(2));
  const Scalar F = Scalar(2) * h * h + c * s * s / kappa;
  const Scalar G = state.r * s2 / (kappa * V2);
  const Scalar dF_dsigma = s - s * s * s / kappa + s2 * c / kappa;
  const Scalar dG_dsigma = Scalar(2) * state.r * c2 / (kappa * V2);
  const Scalar dG_dr = s2 / (kappa * V2);

  const Scalar sigma_dot = a_M / V_M + V_M * s / state.r;
  const Scalar r_dot = -V_M * c;
  const Scalar rho_dot = F + G * a_M;
  const Scalar a1 = (-F - K * rho) / G;
  const Scalar G_dot = dG_dsigma * sigma_dot + dG_dr * r_dot;
  return (-dF_dsigma * sigma_dot - K_dot * rho - K * rho_dot - a1 * G_dot) / G;
}

// ---------------------------------------------------------------------------
// Baselines

template <typename Scalar>
Scalar los_rate(const EngagementState<Scalar>& state, Scalar V_M) {
  using std::sin;
  return -V_M * sin(state.sigma) / state.r;
}

/// Second derivative of the LOS angle given the current lateral acceleration.
template <typename Scalar>
Scalar los_accel(const EngagementState<Scalar>& state, Scalar V_M, Scalar a_M) {
  using std::cos;
  const Scalar r_dot = -V_M * cos(state.sigma);
  return -Scalar(2) * r_dot * los_rate(state, V_M) / state.r - cos(state.sigma) * a_M / state.r;
}

template <typename Scalar>
Scalar png_command(const EngagementState<Scalar>& state, Scalar V_M, Scalar N) {
  if (!(state.r > 0)) throw DomainError("png_command: r must be positive");
  return N * V_M * los_rate(state, V_M);
}

template <typename Scalar>
Scalar deviated_pursuit_command(const EngagementState<Scalar>& state, Scalar V_M) {
  if (!(state.r > 0)) throw DomainError("deviated_pursuit_command: r must be positive");
  return V_M * los_rate(state, V_M);
}

// ---------------------------------------------------------------------------
// Sliding-mode lead-angle capture

/// Signed power sign(x)|x|^a.
template <typename Scalar>
Scalar spow(Scalar x, Scalar a) {
  using std::abs;
  using std::pow;
  if (x == Scalar(0)) return Scalar(0);
  const Scalar m = pow(abs(x), a);
  return x < Scalar(0) ? -m : m;
}

template <typename Scalar>
Scalar sliding_surface(Scalar sigma_e, Scalar sigma_e_dot, Scalar xi, int p_f, int q_f) {
  return sigma_e + spow(sigma_e_dot, Scalar(p_f) / Scalar(q_f)) / xi;
}

/// Sign with a linear boundary layer of half-width `width`; width 0 is the pure sign.
template <typename Scalar>
Scalar sgn_smooth(Scalar s, Scalar width) {
  using std::abs;
  if (width > Scalar(0) && abs(s) < width) return s / width;
  if (s > Scalar(0)) return Scalar(1);
  if (s < Scalar(0)) return Scalar(-1);
  return Scalar(0);
}

template <typename Scalar>
struct Stage1Command {
  Scalar numerator{};  // desired d(a_M)/dt plus rho * a_M
  Scalar command{};
  Scalar s_surface{};
  Scalar sigma_e{};
  Scalar sigma_e_dot{};
  bool margin_guard{false};
};

/// Sliding-mode command driving sigma to sigma_d in finite time.
template <typename Scalar>
Stage1Command<Scalar> stage1_command(const EngagementState<Scalar>& state, const GuidanceGains<Scalar>& gains,
                                     const ActuatorConfig<Scalar>& act, Scalar a_M, Scalar V_M) {
  if (!(state.r > 0)) throw DomainError("stage1_command: r must be positive");
  Stage1Command<Scalar> out;
  const Scalar ratio = Scalar(gains.p_f) / Scalar(gains.q_f);
  out.sigma_e = state.sigma - gains.sigma_d;
  out.sigma_e_dot = a_M / V_M - los_rate(state, V_M);
  out.s_surface = sliding_surface(out.sigma_e, out.sigma_e_dot, gains.xi, gains.p_f, gains.q_f);
  out.numerator = act.rho * a_M + V_M * los_accel(state, V_M, a_M) -
                  V_M * gains.xi * (Scalar(gains.q_f) / Scalar(gains.p_f)) *
                      spow(out.sigma_e_dot, Scalar(2) - ratio) -
                  gains.c * sgn_smooth(out.s_surface, gains.boundary_layer);
  const Scalar margin = saturation_margin(a_M, act.a_max, act.n);
  out.margin_guard = margin < Scalar(kMarginGuard);
  out.command = out.margin_guard ? Scalar(0) : out.numerator / margin;
  return out;
}

/// Saturation-model command pulling a_M onto `target` at rate hold_gain.
template <typename Scalar>
Scalar tracking_command(const EngagementState<Scalar>& state, Scalar target, const GuidanceGains<Scalar>& gains,
                        const ActuatorConfig<Scalar>& act, Scalar a_M, bool* margin_guard = nullptr,
                        Scalar feedforward = Scalar(0)) {
  (void)state;
  const Scalar numerator = act.rho * a_M + feedforward - gains.hold_gain * (a_M - target);
  const Scalar margin = saturation_margin(a_M, act.a_max, act.n);
  const bool guard = margin < Scalar(kMarginGuard);
  if (margin_guard) *margin_guard = guard;
  return guard ? Scalar(0) : numerator / margin;
}

/// Command holding the current lead angle: the saturation-model inverse of a
/// deviated-pursuit acceleration profile.
template <typename Scalar>
Scalar hold_command(const EngagementState<Scalar>& state, const GuidanceGains<Scalar>& gains,
                    const ActuatorConfig<Scalar>& act, Scalar a_M, Scalar V_M, bool* margin_guard = nullptr) {
  return tracking_command(state, deviated_pursuit_command(state, V_M), gains, act, a_M, margin_guard,
                          V_M * los_accel(state, V_M, a_M));
}

/// Analytic switching instant for the two-stage law:
/// [V(t_d + eps) - L r0] / (V [1 - L cos sigma_d]), L = 1 + sin^2(sigma_d)/kappa,
/// clamped at 0.
template <typename Scalar>
Scalar switching_time_t1(Scalar r0, Scalar sigma_d, Scalar V_M, Scalar t_d, Scalar kappa, Scalar epsilon_t1) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(sigma_d);
  const Scalar lambda = Scalar(1) + s * s / kappa;
  const Scalar den = V_M * (Scalar(1) - lambda * cos(sigma_d));
  if (!(den > Scalar(0))) {
    throw ConfigError("switching_time_t1: deviated pursuit at sigma_d cannot extend the impact time");
  }
  return std::max(Scalar(0), (V_M * (t_d + epsilon_t1) - lambda * r0) / den);
}

// ---------------------------------------------------------------------------
// Backstepping law

template <typename Scalar>
struct BlfCommand {
  Scalar numerator{};
  Scalar command{};
  GuidanceDiagnostics<Scalar> diag{};
  BarrierRatios<Scalar> ratios{};
  bool degenerate{false};
  bool barrier_violated{false};
  bool margin_guard{false};
};

/// Backstepping command. `kappa2_dot` is the rate estimate of kappa2_bar and
/// `last_ratios` the most recent finite barrier ratios.
template <typename Scalar>
BlfCommand<Scalar> blf_command(const EngagementState<Scalar>& state, const ErrorTerms<Scalar>& e,
                               const GuidanceGains<Scalar>& gains, const ActuatorConfig<Scalar>& act,
                               Scalar a_M, Scalar V_M, Scalar kappa2_dot,
                               const BarrierRatios<Scalar>& last_ratios = {}) {
  using std::pow;
  BlfCommand<Scalar> out;
  const Scalar kappa = gains.timing().kappa();
  const auto fg = error_dynamics_terms(state, V_M, kappa);
  const auto k2 = kappa2_bar(e, gains.beta_bar, last_ratios);
  const auto m = mu(e, gains.p);
  out.ratios = k2.ratios;
  out.degenerate = k2.degenerate;
  out.barrier_violated = m.violated;

  auto& d = out.diag;
  d.F_p = fg.F_p;
  d.G_p = fg.G_p;
  d.kappa2_bar = k2.value;
  d.mu = m.value;
  d.active_stage = ActiveStage::blf;
  if (sigma_singular(state.sigma)) {
    d.alpha1 = 0;
    d.alpha1_dot = 0;
  } else {
    const Scalar K = gains.kappa1_bar + k2.value;
    d.alpha1 = alpha1(fg.F_p, fg.G_p, e.rho, gains.kappa1_bar, k2.value);
    d.alpha1_dot = alpha1_dot(state, V_M, kappa, e.rho, K, kappa2_dot, a_M);
  }
  d.z2_bar = a_M - d.alpha1;
  out.numerator = act.rho * a_M + d.alpha1_dot - m.value * fg.G_p * pow(e.rho, 2 * gains.p - 1) -
                  gains.kappa3_bar * d.z2_bar;
  const Scalar margin = saturation_margin(a_M, act.a_max, act.n);
  out.margin_guard = margin < Scalar(kMarginGuard);
  out.command = out.margin_guard ? Scalar(0) : out.numerator / margin;
  return out;
}

// ---------------------------------------------------------------------------
// Per-scenario evaluation context

template <typename Scalar>
struct GuidanceOutput {
  Scalar command{};      // after clamp, fed to the saturation model
  Scalar raw_command{};  // before clamp
  ErrorTerms<Scalar> errors{};
  GuidanceDiagnostics<Scalar> diag{};
  int phase{0};  // 0 baseline, 1 pre-switch, 2 backstepping
  bool clamped{false};
  bool degenerate{false};
  bool barrier_violated{false};
  bool margin_guard{false};
  bool switched{false};
};

/// Owns the state a law carries between evaluations: the one-way stage flag of
/// the two-stage law, the backward-difference memory of kappa2_bar, the last
/// finite barrier ratios and the last command. One per scenario.
template <typename Scalar>
class GuidanceContext {
 public:
  GuidanceContext(Law law, const GuidanceGains<Scalar>& gains, const ActuatorConfig<Scalar>& actuator,
                  Scalar V_M, Scalar t_d)
      : law_(law), gains_(gains), act_(actuator), V_M_(V_M), t_d_(t_d) {
    phase_ = law == Law::blf ? 2 : (law == Law::multi_stage ? 1 : 0);
  }

  Law law() const { return law_; }
  int phase() const { return phase_; }
  std::optional<Scalar> switch_time() const { return switch_time_; }
  Scalar kappa2_rate() const { return k2_rate_; }

  /// Evaluates the law at `state` (time `state.t`) with saturation state `a_M`.
  GuidanceOutput<Scalar> update(const EngagementState<Scalar>& state, Scalar a_M) {
    GuidanceOutput<Scalar> out;
    out.errors = error_terms(state, state.t, t_d_, gains_.sigma_max, V_M_, gains_.timing());
    out.phase = phase_;

    if (is_baseline(law_)) {
      out.raw_command = law_ == Law::png ? png_command(state, V_M_, gains_.N)
                                         : deviated_pursuit_command(state, V_M_);
      out.command = std::clamp(out.raw_command, -act_.a_max, act_.a_max);
      out.clamped = out.command != out.raw_command;
      out.diag.active_stage = ActiveStage::baseline;
      last_command_ = out.command;
      return out;
    }

    // kappa2_bar is tracked on every evaluation so its rate is available the
    // moment the backstepping stage engages.
    const auto k2 = kappa2_bar(out.errors, gains_.beta_bar, ratios_);
    if (has_prev_k2_ && state.t > prev_t_) {
      k2_rate_ = (k2.value - prev_k2_) / (state.t - prev_t_);
    }
    if (!has_prev_k2_ || state.t > prev_t_) {
      prev_k2_ = k2.value;
      prev_t_ = state.t;
      has_prev_k2_ = true;
    }

    if (phase_ == 1 && out.errors.t_go_d <= out.errors.t_go_max) {
      phase_ = 2;
      switch_time_ = state.t;
      out.switched = true;
    }
    out.phase = phase_;

    if (phase_ == 2 && state.r <= gains_.terminal_hold * V_M_) {
      // Blind range: G_p vanishes with r and the backstepping terms lose
      // conditioning; hold the achieved acceleration instead.
      const Scalar margin = saturation_margin(a_M, act_.a_max, act_.n);
      out.margin_guard = margin < Scalar(kMarginGuard);
      out.raw_command = out.margin_guard ? last_command_ : act_.rho * a_M / margin;
      out.diag.active_stage = ActiveStage::terminal;
    } else if (phase_ == 2 && state.r <= gains_.png_handover * V_M_) {
      bool guard = false;
      const Scalar cmd = tracking_command(state, png_command(state, V_M_, gains_.N), gains_, act_, a_M, &guard);
      out.margin_guard = guard;
      out.raw_command = guard ? last_command_ : cmd;
      out.diag.active_stage = ActiveStage::terminal;
    } else if (phase_ == 1) {
      stage_one(state, a_M, out);
    } else {
      const auto blf = blf_command(state, out.errors, gains_, act_, a_M, V_M_, k2_rate_, ratios_);
      ratios_ = blf.ratios;
      out.diag = blf.diag;
      out.degenerate = blf.degenerate;
      out.barrier_violated = blf.barrier_violated;
      out.margin_guard = blf.margin_guard;
      out.raw_command = blf.margin_guard ? last_command_ : blf.command;
    }
    if (phase_ == 1) ratios_ = k2.ratios;

    const auto [clamped_value, clamped] = clamp_command(out.raw_command, act_.a_max);
    out.command = clamped_value;
    out.clamped = clamped;
    if (clamped) out.diag.active_stage = ActiveStage::clamped;
    last_command_ = out.command;
    return out;
  }

 private:
  void stage_one(const EngagementState<Scalar>& state, Scalar a_M, GuidanceOutput<Scalar>& out) {
    using std::abs;
    const auto sm = stage1_command(state, gains_, act_, a_M, V_M_);
    out.diag.s_surface = sm.s_surface;
    const Scalar capture = deg2rad(Scalar(0.1));
    if (!holding_ && abs(sm.sigma_e) < capture && abs(sm.s_surface) < gains_.boundary_layer) {
      holding_ = true;
    } else if (holding_ && abs(sm.sigma_e) > Scalar(2) * capture) {
      holding_ = false;
    }
    if (holding_) {
      bool guard = false;
      const Scalar cmd = hold_command(state, gains_, act_, a_M, V_M_, &guard);
      out.margin_guard = guard;
      out.raw_command = guard ? last_command_ : cmd;
      out.diag.active_stage = ActiveStage::hold;
    } else {
      out.margin_guard = sm.margin_guard;
      out.raw_command = sm.margin_guard ? last_command_ : sm.command;
      out.diag.active_stage = ActiveStage::sliding;
    }
  }

  Law law_;
  GuidanceGains<Scalar> gains_;
  ActuatorConfig<Scalar> act_;
  Scalar V_M_;
  Scalar t_d_;
  int phase_{0};
  std::optional<Scalar> switch_time_{};
  bool holding_{false};
  bool has_prev_k2_{false};
  Scalar prev_k2_{};
  Scalar prev_t_{};
  Scalar k2_rate_{};
  BarrierRatios<Scalar> ratios_{};
  Scalar last_command_{};
};

}  // namespace itg
