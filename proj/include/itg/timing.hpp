#pragma once

// Time-to-go estimate, impact-time error and its time-varying barriers.

#include <itg/kinematics.hpp>
#include <itg/types.hpp>

#include <cmath>
#include <utility>

namespace itg {

template <typename Scalar>
struct TimingGains {
  Scalar N{3};

  explicit TimingGains(Scalar nav_constant = Scalar(3)) : N(nav_constant) {
    if (!(N > Scalar(1))) {
      throw ConfigError("navigation constant N must exceed 1");
    }
  }

  /// kappa = 2(2N - 1)
  Scalar kappa() const { return Scalar(2) * (Scalar(2) * N - Scalar(1)); }
};

/// Impact-time error and its barriers. `gap_upper` and `gap_lower` hold
/// rho1 - rho and rho - rho2 evaluated in closed form, so barrier proximity
/// stays accurate when rho and the barriers are nearly equal.
template <typename Scalar>
struct ErrorTerms {
  Scalar rho{};
  Scalar rho1{};
  Scalar rho2{};
  Scalar rho1_dot{};
  Scalar rho2_dot{};
  Scalar t_go{};
  Scalar t_go_d{};
  Scalar t_go_max{};
  Scalar t_go_min{};
  Scalar gap_upper{};
  Scalar gap_lower{};
  bool past_desired{false};  // elapsed time beyond t_d

  bool inside_barrier() const { return gap_upper > Scalar(0) && gap_lower > Scalar(0); }
};

template <typename Scalar>
Scalar time_to_go(Scalar r, Scalar sigma, Scalar V_M, const TimingGains<Scalar>& gains) {
  using std::sin;
  const Scalar s = sin(sigma);
  return (r / V_M) * (Scalar(1) + s * s / gains.kappa());
}

template <typename Scalar>
ErrorTerms<Scalar> error_terms(const EngagementState<Scalar>& state, Scalar t, Scalar t_d,
                               Scalar sigma_max, Scalar V_M, const TimingGains<Scalar>& gains) {
  using std::cos;
  using std::sin;
  const Scalar kappa = gains.kappa();
  const Scalar s = sin(state.sigma);
  const Scalar smax = sin(sigma_max);
  const Scalar c = cos(state.sigma);
  const Scalar tau = state.r / V_M;

  ErrorTerms<Scalar> e;
  e.t_go_d = t_d - t;
  e.t_go = tau * (Scalar(1) + s * s / kappa);
  e.t_go_max = tau * (Scalar(1) + smax * smax / kappa);
  e.t_go_min = tau;
  e.rho = e.t_go - e.t_go_d;
  e.rho1 = e.t_go_max - e.t_go_d;
  e.rho2 = e.t_go_min - e.t_go_d;
  e.rho1_dot = Scalar(1) - c - c * smax * smax / kappa;
  e.rho2_dot = Scalar(1) - c;
  e.gap_upper = tau * (smax * smax - s * s) / kappa;
  e.gap_lower = tau * s * s / kappa;
  e.past_desired = e.t_go_d < Scalar(0);
  return e;
}

/// Desired impact times a single-stage run can realize: (r0/V, t_go^M(0)).
template <typename Scalar>
std::pair<Scalar, Scalar> feasibility_window(Scalar r0, Scalar V_M, Scalar sigma_max,
                                             const TimingGains<Scalar>& gains) {
  if (!(r0 > Scalar(0))) {
    throw DomainError("feasibility_window: r0 must be positive");
  }
  return {r0 / V_M, time_to_go(r0, sigma_max, V_M, gains)};
}

template <typename Scalar>
bool single_stage_feasible(Scalar t_d, Scalar r0, Scalar V_M, Scalar sigma_max,
                           const TimingGains<Scalar>& gains) {
  const auto [lo, hi] = feasibility_window(r0, V_M, sigma_max, gains);
  return t_d > lo && t_d < hi;
}

/// Upper bound on impact time reachable while |sigma| <= sigma_max.
template <typename Scalar>
Scalar max_achievable_impact_time(Scalar r0, Scalar V_M, Scalar sigma_max) {
  using std::cos;
  if (!(sigma_max < std::numbers::pi_v<Scalar> / Scalar(2))) {
    throw DomainError("max_achievable_impact_time: sigma_max must be below pi/2");
  }
  return r0 / (V_M * cos(sigma_max));
}

/// Barrier Lyapunov value (log barrier on rho plus quadratic z2 term).
template <typename Scalar>
Scalar blf_lyapunov(Scalar rho, Scalar rho1, Scalar rho2, Scalar z2, int p) {
  using std::log;
  using std::pow;
  const Scalar rb = rho > Scalar(0) ? rho / rho1 : rho / rho2;
  const Scalar rb2p = pow(rb, 2 * p);
  return log(Scalar(1) / (Scalar(1) - rb2p)) / Scalar(2 * p) + z2 * z2 / Scalar(2);
}

/// Envelope (rho_L, rho_U) guaranteed by the backstepping design for a
/// decay exponent kappa_p. Diagnostic only.
template <typename Scalar>
std::pair<Scalar, Scalar> barrier_envelope(Scalar rho1, Scalar rho2, Scalar V0, Scalar kappa_p, int p,
                                           Scalar t) {
  using std::exp;
  const Scalar factor = Scalar(1) - exp(-Scalar(2 * p) * V0 * exp(-Scalar(2) * kappa_p * t));
  return {rho2 * factor, rho1 * factor};
}

}  // namespace itg
