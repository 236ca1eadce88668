#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace itg {

/// Gravity used to convert g-denominated acceleration bounds.
inline constexpr double kGravity = 9.81;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Raised when the integrated state is corrupted (non-finite values, r <= 0 mid-flight).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid scenario, gain or actuator configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an analytic formula is evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Layout of the joint vector integrated by the runner: engagement states
/// followed by the actuator chain states.
enum JointIndex : Eigen::Index {
  kRange = 0,
  kLos,
  kLead,
  kPosX,
  kPosY,
  kAccel,
  kLag1,
  kLag2,
  kJointSize
};

template <typename Scalar>
using JointVector = Eigen::Matrix<Scalar, kJointSize, 1>;

}  // namespace itg
