#pragma once

// Independent reference evaluations used by the tests. Everything here is
// written directly from the defining formulas and shares no code with the
// library beyond plain data types.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double rad(double deg) { return deg * pi / 180.0; }

// (r / V)(1 + sin^2 sigma / kappa), kappa = 2(2N - 1)
inline double tgo(double r, double sigma, double V, double N = 3.0) {
  const double kappa = 2.0 * (2.0 * N - 1.0);
  return r / V * (1.0 + std::sin(sigma) * std::sin(sigma) / kappa);
}

// Error dynamics in the form 1 - cos(sigma)(1 - sin^2(sigma)/kappa).
inline double F_p(double sigma, double kappa) {
  return 1.0 - std::cos(sigma) * (1.0 - std::sin(sigma) * std::sin(sigma) / kappa);
}

inline double G_p(double r, double sigma, double V, double kappa) {
  return r * std::sin(2.0 * sigma) / (kappa * V * V);
}

// Step response of 1/((tau1 s + 1)(tau2 s + 1)).
inline double two_pole_step(double t, double tau1, double tau2) {
  return 1.0 - (tau1 * std::exp(-t / tau1) - tau2 * std::exp(-t / tau2)) / (tau1 - tau2);
}

// Bitwise equality that also treats equal NaN payloads as equal.
inline bool same_bits(double a, double b) {
  std::uint64_t x, y;
  std::memcpy(&x, &a, sizeof x);
  std::memcpy(&y, &b, sizeof y);
  return x == y;
}

}  // namespace oracle
