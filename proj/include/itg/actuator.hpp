#pragma once

// Input-saturation model and optional autopilot lag, chained as
// command -> saturation model -> autopilot -> kinematics.

#include <itg/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <utility>

namespace itg {

enum class AutopilotOrder { none, first, second };

template <typename Scalar>
struct AutopilotConfig {
  AutopilotOrder order{AutopilotOrder::none};
  Scalar tau1{0.56};
  Scalar tau2{0.1};

  void validate() const {
    if (order != AutopilotOrder::none && !(tau1 > Scalar(0))) {
      throw ConfigError("autopilot time constant tau1 must be positive");
    }
    if (order == AutopilotOrder::second && !(tau2 > Scalar(0))) {
      throw ConfigError("autopilot time constant tau2 must be positive");
    }
  }

  bool operator==(const AutopilotConfig&) const = default;
};

template <typename Scalar>
struct ActuatorConfig {
  Scalar a_max{20 * kGravity};  // m/s^2
  int n{2};                     // even, >= 2
  Scalar rho{0.1};              // 1/s
  AutopilotConfig<Scalar> autopilot{};

  void validate() const {
    if (!(a_max > Scalar(0))) throw ConfigError("a_max must be positive");
    if (n < 2 || n % 2 != 0) throw ConfigError("saturation exponent n must be an even integer >= 2");
    if (!(rho > Scalar(0))) throw ConfigError("saturation damping rho must be positive");
    autopilot.validate();
  }

  bool operator==(const ActuatorConfig&) const = default;
};

template <typename Scalar>
struct ActuatorChainState {
  Scalar a_M{};  // saturation-model output
  Scalar ap1{};  // first lag state
  Scalar ap2{};  // second lag state
};

/// 1 - (a_M / a_max)^n
template <typename Scalar>
Scalar saturation_margin(Scalar a_M, Scalar a_max, int n) {
  using std::pow;
  return Scalar(1) - pow(a_M / a_max, n);
}

template <typename Scalar>
Scalar saturation_rhs(Scalar a_M, Scalar a_M_c, Scalar a_max, int n, Scalar rho) {
  return saturation_margin(a_M, a_max, n) * a_M_c - rho * a_M;
}

/// Strict bound on |a_M| reachable under commands bounded by U_M.
template <typename Scalar>
Scalar delta_M(Scalar U_M, Scalar a_max, Scalar rho, int n) {
  using std::pow;
  if (!(U_M > Scalar(0))) {
    throw DomainError("delta_M: command bound U_M must be positive");
  }
  return a_max * pow(U_M / (U_M + rho * a_max), Scalar(1) / Scalar(n));
}

/// Lag-state derivatives (d ap1, d ap2) driven by the desired acceleration,
/// i.e. the saturation-model output. Second order is the cascade
/// 1/((tau1 s + 1)(tau2 s + 1)).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> autopilot_rhs(const ActuatorChainState<Scalar>& chain,
                                          const AutopilotConfig<Scalar>& cfg, Scalar a_M_d) {
  Eigen::Matrix<Scalar, 2, 1> d = Eigen::Matrix<Scalar, 2, 1>::Zero();
  switch (cfg.order) {
    case AutopilotOrder::none:
      break;
    case AutopilotOrder::first:
      if (!(cfg.tau1 > Scalar(0))) throw ConfigError("autopilot tau must be positive");
      d(0) = (a_M_d - chain.ap1) / cfg.tau1;
      break;
    case AutopilotOrder::second:
      if (!(cfg.tau1 > Scalar(0)) || !(cfg.tau2 > Scalar(0))) {
        throw ConfigError("autopilot time constants must be positive");
      }
      d(0) = (a_M_d - chain.ap1) / cfg.tau1;
      d(1) = (chain.ap1 - chain.ap2) / cfg.tau2;
      break;
  }
  return d;
}

template <typename Scalar>
Scalar achieved_acceleration(const ActuatorChainState<Scalar>& chain, const AutopilotConfig<Scalar>& cfg) {
  switch (cfg.order) {
    case AutopilotOrder::first:
      return chain.ap1;
    case AutopilotOrder::second:
      return chain.ap2;
    case AutopilotOrder::none:
      break;
  }
  return chain.a_M;
}

/// Commands beyond this multiple of a_max are clamped before entering the
/// saturation model so that the command bound U_M stays finite.
inline constexpr double kCommandClampFactor = 50.0;

template <typename Scalar>
std::pair<Scalar, bool> clamp_command(Scalar a_M_c, Scalar a_max) {
  const Scalar limit = Scalar(kCommandClampFactor) * a_max;
  if (a_M_c > limit) return {limit, true};
  if (a_M_c < -limit) return {-limit, true};
  return {a_M_c, false};
}

}  // namespace itg
