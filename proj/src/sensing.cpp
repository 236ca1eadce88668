#include <itg/sensing.hpp>
#include <itg/types.hpp>

namespace itg {

void FilterGains::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("filter alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 2.0 - alpha)) throw ConfigError("filter beta must lie in (0, 2 - alpha]");
}

void NoiseConfig::validate() const {
  if (!(angle_sigma >= 0.0)) throw ConfigError("noise angle_sigma must be non-negative");
  if (!(range_rel_bound >= 0.0 && range_rel_bound < 1.0)) {
    throw ConfigError("noise range_rel_bound must lie in [0, 1)");
  }
  if (!(sample_rate > 0.0)) throw ConfigError("noise sample_rate must be positive");
  range_filter.validate();
  angle_filter.validate();
}

bool AlphaBetaState::stable() const { return alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta <= 2.0 - alpha; }

AlphaBetaState alpha_beta_update(const AlphaBetaState& f, double z) {
  AlphaBetaState next = f;
  const double x_pred = f.x_hat + f.v_hat * f.dt_s;
  const double residual = z - x_pred;
  next.x_hat = x_pred + f.alpha * residual;
  next.v_hat = f.v_hat + (f.beta / f.dt_s) * residual;
  return next;
}

Measurement corrupt(const EngagementState<double>& truth, const NoiseConfig& cfg, std::mt19937_64& rng) {
  Measurement m{truth.r, truth.theta_L, truth.heading()};
  if (cfg.angle_sigma > 0.0) {
    std::normal_distribution<double> angle(0.0, cfg.angle_sigma);
    m.theta_L += angle(rng);
    m.gamma_M += angle(rng);
  }
  if (cfg.range_rel_bound > 0.0) {
    std::uniform_real_distribution<double> range(-cfg.range_rel_bound, cfg.range_rel_bound);
    m.r *= 1.0 + range(rng);
  }
  return m;
}

SensorPipeline::SensorPipeline(const NoiseConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate();
  const double dt = 1.0 / cfg_.sample_rate;
  range_ = {0.0, 0.0, cfg_.range_filter.alpha, cfg_.range_filter.beta, dt};
  los_ = {0.0, 0.0, cfg_.angle_filter.alpha, cfg_.angle_filter.beta, dt};
  heading_ = los_;
}

SensedState SensorPipeline::update(const EngagementState<double>& truth) {
  SensedState out;
  out.raw = corrupt(truth, cfg_, rng_);
  if (!initialized_) {
    range_.x_hat = out.raw.r;
    los_.x_hat = out.raw.theta_L;
    heading_.x_hat = out.raw.gamma_M;
    initialized_ = true;
  } else {
    range_ = alpha_beta_update(range_, out.raw.r);
    los_ = alpha_beta_update(los_, out.raw.theta_L);
    heading_ = alpha_beta_update(heading_, out.raw.gamma_M);
  }
  out.state = truth;
  out.state.r = range_.x_hat;
  out.state.theta_L = los_.x_hat;
  out.gamma_M = heading_.x_hat;
  out.state.sigma = heading_.x_hat - los_.x_hat;
  out.r_dot = range_.v_hat;
  out.theta_L_dot = los_.v_hat;
  return out;
}

}  // namespace itg
