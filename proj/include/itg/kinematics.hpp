#pragma once

// Planar interceptor/stationary-target kinematics in polar relative
// coordinates, plus the fixed-step integrator used by the runner.

#include <itg/types.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <ranges>
#include <sstream>

namespace itg {

template <typename Scalar>
struct EngagementState {
  Scalar r{};        // relative range, m
  Scalar theta_L{};  // line-of-sight angle, rad
  Scalar sigma{};    // velocity lead angle, rad
  Scalar x{};        // interceptor position, m
  Scalar y{};
  Scalar t{};        // elapsed time, s

  /// Heading angle; stored implicitly as sigma + theta_L.
  Scalar heading() const { return sigma + theta_L; }

  bool finite() const {
    using std::isfinite;
    return isfinite(r) && isfinite(theta_L) && isfinite(sigma) && isfinite(x) &&
           isfinite(y) && isfinite(t);
  }

  bool operator==(const EngagementState&) const = default;
};

template <typename Scalar>
struct StateDerivative {
  Scalar r_dot{};
  Scalar theta_L_dot{};
  Scalar sigma_dot{};
  Scalar x_dot{};
  Scalar y_dot{};
};

template <typename Scalar>
StateDerivative<Scalar> dynamics_rhs(const EngagementState<Scalar>& s, Scalar a_M, Scalar V_M) {
  using std::cos;
  using std::isfinite;
  using std::sin;
  if (!s.finite() || !isfinite(a_M) || !isfinite(V_M)) {
    std::ostringstream os;
    os << "dynamics_rhs: non-finite input at t=" << s.t << " (r=" << s.r << ", sigma=" << s.sigma
       << ", a_M=" << a_M << ")";
    throw SimulationError(os.str());
  }
  if (!(s.r > Scalar(0)) || !(V_M > Scalar(0))) {
    std::ostringstream os;
    os << "dynamics_rhs: requires r > 0 and V_M > 0 (r=" << s.r << ", V_M=" << V_M << ")";
    throw SimulationError(os.str());
  }
  StateDerivative<Scalar> d;
  d.r_dot = -V_M * cos(s.sigma);
  d.theta_L_dot = -V_M * sin(s.sigma) / s.r;
  d.sigma_dot = a_M / V_M - d.theta_L_dot;
  const Scalar gamma = s.heading();
  d.x_dot = V_M * cos(gamma);
  d.y_dot = V_M * sin(gamma);
  return d;
}

/// Classical fourth-order Runge-Kutta step. `rhs(t, y)` returns dy/dt with the
/// same shape as `y`.
template <typename Vector, typename Rhs>
Vector rk4_step(const Vector& y, typename Vector::Scalar t, typename Vector::Scalar dt, Rhs&& rhs) {
  using Scalar = typename Vector::Scalar;
  if (!(dt > Scalar(0))) {
    throw SimulationError("rk4_step: dt must be positive");
  }
  const Scalar half = dt / Scalar(2);
  auto checked = [&](const Vector& k, int stage) -> const Vector& {
    if (!k.allFinite()) {
      std::ostringstream os;
      os << "rk4_step: non-finite derivative in stage " << stage << " at t=" << t << ", dt=" << dt
         << ", y=[" << y.transpose() << "]";
      throw SimulationError(os.str());
    }
    return k;
  };
  const Vector k1 = checked(rhs(t, y), 1);
  const Vector k2 = checked(rhs(t + half, Vector(y + half * k1)), 2);
  const Vector k3 = checked(rhs(t + half, Vector(y + half * k2)), 3);
  const Vector k4 = checked(rhs(t + dt, Vector(y + dt * k3)), 4);
  Vector next = y + (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
  if (!next.allFinite()) {
    std::ostringstream os;
    os << "rk4_step: non-finite state after step at t=" << t;
    throw SimulationError(os.str());
  }
  return next;
}

/// Closest approach over a sampled run. Each element needs `.t` and `.r`.
///
/// The discrete minimum is refined with a parabola through r^2 at the
/// neighbouring samples; r^2 is exactly quadratic in time for an unforced
/// straight-line pass, so the refinement is exact there.
template <std::ranges::random_access_range Samples>
auto miss_distance(const Samples& samples) {
  using Scalar = std::remove_cvref_t<decltype(std::ranges::begin(samples)->r)>;
  using std::sqrt;
  const auto n = std::ranges::size(samples);
  if (n == 0) {
    throw DomainError("miss_distance: empty trajectory");
  }
  auto first = std::ranges::begin(samples);
  auto it = std::ranges::min_element(samples, {}, [](const auto& s) { return s.r; });
  const auto k = static_cast<std::size_t>(std::distance(first, it));
  Scalar best = it->r;
  if (k == 0 || k + 1 >= n) {
    return best;
  }
  const auto& a = first[k - 1];
  const auto& b = first[k];
  const auto& c = first[k + 1];
  // Newton form of the interpolating parabola in (t, r^2).
  const Scalar fa = a.r * a.r, fb = b.r * b.r, fc = c.r * c.r;
  const Scalar d1 = (fb - fa) / (b.t - a.t);
  const Scalar d2 = ((fc - fb) / (c.t - b.t) - d1) / (c.t - a.t);
  if (!(d2 > Scalar(0))) {
    return best;
  }
  // f(t) = fa + d1 (t - ta) + d2 (t - ta)(t - tb)
  const Scalar t_star = (a.t + b.t) / Scalar(2) - d1 / (Scalar(2) * d2);
  if (t_star < a.t || t_star > c.t) {
    return best;
  }
  const Scalar f_star = fa + d1 * (t_star - a.t) + d2 * (t_star - a.t) * (t_star - b.t);
  return std::min(best, sqrt(std::max(f_star, Scalar(0))));
}

}  // namespace itg
