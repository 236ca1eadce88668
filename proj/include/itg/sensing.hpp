#pragma once

// Measurement corruption and alpha-beta filtering for noisy-seeker runs.

#include <itg/kinematics.hpp>

#include <cstdint>
#include <random>

namespace itg {

struct FilterGains {
  double alpha{0.7};
  double beta{0.1};

  void validate() const;
  bool operator==(const FilterGains&) const = default;
};

struct NoiseConfig {
  double angle_sigma{0.015};     // rad, Gaussian on LOS and heading angles
  double range_rel_bound{0.01};  // uniform relative range error bound
  double sample_rate{100.0};     // Hz
  std::uint64_t seed{1};
  FilterGains range_filter{};
  FilterGains angle_filter{};

  void validate() const;
  bool operator==(const NoiseConfig&) const = default;
};

struct Measurement {
  double r{};
  double theta_L{};
  double gamma_M{};
};

/// Two-state (value, rate) steady-state tracking filter.
struct AlphaBetaState {
  double x_hat{};
  double v_hat{};
  double alpha{0.7};
  double beta{0.1};
  double dt_s{0.01};

  /// 0 < alpha < 1 and 0 < beta <= 2 - alpha.
  bool stable() const;
};

AlphaBetaState alpha_beta_update(const AlphaBetaState& f, double z);

Measurement corrupt(const EngagementState<double>& truth, const NoiseConfig& cfg, std::mt19937_64& rng);

/// Filtered view of the engagement handed to guidance in noisy runs.
struct SensedState {
  EngagementState<double> state{};  // r, theta_L, sigma (= gamma - theta), t of the sample
  double gamma_M{};
  double r_dot{};
  double theta_L_dot{};
  Measurement raw{};
};

/// Corrupts truth, updates the per-channel filters and reconstructs
/// sigma_hat = gamma_hat - theta_hat. Call once per sample instant.
class SensorPipeline {
 public:
  explicit SensorPipeline(const NoiseConfig& cfg);

  SensedState update(const EngagementState<double>& truth);

  double sample_period() const { return 1.0 / cfg_.sample_rate; }
  const AlphaBetaState& range_filter() const { return range_; }
  const AlphaBetaState& los_filter() const { return los_; }
  const AlphaBetaState& heading_filter() const { return heading_; }

 private:
  NoiseConfig cfg_;
  std::mt19937_64 rng_;
  AlphaBetaState range_;
  AlphaBetaState los_;
  AlphaBetaState heading_;
  bool initialized_{false};
};

}  // namespace itg
