#include "oracles.hpp"

#include <itg/guidance.hpp>

#include <doctest.h>

#include <cmath>
#include <string>

using namespace itg;

namespace {

constexpr double kV = 250.0;
constexpr double kKappa = 10.0;
const double kSigmaMax = oracle::rad(80);

EngagementState<double> at(double sigma, double r = 10000.0, double t = 0.0) {
  return {r, 0.0, sigma, 0.0, 0.0, t};
}

// Stabilizing function written out from its definition, with kappa2_bar
// computed from the barrier ratios of the current state.
struct Alpha1Oracle {
  double t_d{42.0};
  double beta{1.0};
  double kappa1{1.0};
  bool freeze_K{false};
  double K_frozen{0.0};

  double value(double r, double sigma, double t) const {
    const double tgo_d = t_d - t;
    const double rho = oracle::tgo(r, sigma, kV) - tgo_d;
    const double rho1 = oracle::tgo(r, kSigmaMax, kV) - tgo_d;
    const double rho2 = r / kV - tgo_d;
    const double c = std::cos(sigma);
    const double smax2 = std::sin(kSigmaMax) * std::sin(kSigmaMax);
    const double rho1_dot = 1.0 - c - c * smax2 / kKappa;
    const double rho2_dot = 1.0 - c;
    const double k2 = std::sqrt(beta + std::pow(rho1_dot / rho1, 2) + std::pow(rho2_dot / rho2, 2));
    const double K = freeze_K ? K_frozen : kappa1 + k2;
    return (-oracle::F_p(sigma, kKappa) - K * rho) / oracle::G_p(r, sigma, kV, kKappa);
  }
};

// Flow of (r, sigma) under a constant achieved acceleration.
// Negative h integrates backwards in time.
EngagementState<double> advance(EngagementState<double> s, double a_M, double h) {
  using V2 = Eigen::Vector2d;
  const double dir = h < 0 ? -1.0 : 1.0;
  const V2 y = rk4_step(V2(s.r, s.sigma), s.t, std::abs(h), [&](double, const V2& z) {
    return V2(dir * V2(-kV * std::cos(z(1)), a_M / kV + kV * std::sin(z(1)) / z(0)));
  });
  s.r = y(0);
  s.sigma = y(1);
  s.t += h;
  return s;
}

}  // namespace

TEST_CASE("error dynamics terms") {
  auto fg = error_dynamics_terms(at(0.0), kV, kKappa);
  CHECK(fg.F_p == 0.0);
  CHECK(fg.G_p == 0.0);
  fg = error_dynamics_terms(at(oracle::rad(60)), kV, kKappa);
  CHECK(fg.F_p == doctest::Approx(0.5375).epsilon(1e-12));
  CHECK(fg.G_p == doctest::Approx(0.0138564).epsilon(1e-5));
  for (int i = -40; i <= 40; ++i) {
    const double s = 0.035 * i;
    const auto v = error_dynamics_terms(at(s, 1234.0), kV, kKappa);
    CHECK(v.F_p == doctest::Approx(oracle::F_p(s, kKappa)).epsilon(1e-12));
    CHECK(v.G_p == doctest::Approx(oracle::G_p(1234.0, s, kV, kKappa)).epsilon(1e-12));
  }
}

TEST_CASE("error rate equals F_p + G_p a_M along the flow") {
  const double a = -35.0, h = 1e-4;
  const auto s0 = at(oracle::rad(50), 6000.0, 3.0);
  auto rho = [](const EngagementState<double>& s) { return oracle::tgo(s.r, s.sigma, kV) - (42.0 - s.t); };
  const double fd = (rho(advance(s0, a, h)) - rho(advance(s0, a, -h))) / (2 * h);
  const auto fg = error_dynamics_terms(s0, kV, kKappa);
  CHECK(fd == doctest::Approx(fg.F_p + fg.G_p * a).epsilon(1e-8));
}

TEST_CASE("kappa2_bar") {
  ErrorTerms<double> e;
  e.rho1 = 1.0;
  e.rho2 = -1.0;
  CHECK(kappa2_bar(e, 1.0).value == 1.0);
  e.rho1 = 0.4515 / 0.24024;
  e.rho1_dot = 0.4515;
  e.rho2 = -2.0;
  e.rho2_dot = 0.5;
  const double k = kappa2_bar(e, 1.0).value;
  CHECK(k == doctest::Approx(1.05840).epsilon(1e-5));
  ErrorTerms<double> scaled = e;
  scaled.rho1 *= 3.7;
  scaled.rho1_dot *= 3.7;
  scaled.rho2 *= 3.7;
  scaled.rho2_dot *= 3.7;
  CHECK(kappa2_bar(scaled, 1.0).value == doctest::Approx(k).epsilon(1e-14));

  ErrorTerms<double> degenerate = e;
  degenerate.rho1 = 0.0;
  const auto kd = kappa2_bar(degenerate, 1.0, {0.5, 0.0});
  CHECK(kd.degenerate);
  CHECK(kd.ratios.upper == 0.5);
}

TEST_CASE("alpha1") {
  const double a = alpha1(0.5375, 0.0138564, 1.0, 1.0, 1.05840);
  CHECK(a == doctest::Approx(-187.34).epsilon(1e-4));
  for (int i = 1; i < 89; ++i) {
    const auto fg = error_dynamics_terms(at(oracle::rad(i)), kV, kKappa);
    CHECK(alpha1(fg.F_p, fg.G_p, 0.3, 1.0, 1.2) < 0.0);
  }
  // Near the end of a converged run alpha1 vanishes with sigma.
  const auto fg = error_dynamics_terms(at(1e-9, 5.0), kV, kKappa);
  CHECK(std::abs(alpha1(fg.F_p, fg.G_p, 0.0, 1.0, 1.0)) < 1e-3);
}

TEST_CASE("mu barrier gain") {
  const auto m = mu(1.0, 1.8794, -2.0, 1);
  CHECK(m.value == doctest::Approx(0.39491).epsilon(1e-4));
  CHECK_FALSE(m.violated);
  CHECK(mu(0.0, 1.8794, -2.0, 1).value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(mu(0.0, 1.8794, -2.0, 2).value == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(mu(1.8794 - 1e-9, 1.8794, -2.0, 1).value > 1e8);
  const auto v = mu(2.5, 1.8794, -2.0, 1);
  CHECK(v.violated);
  CHECK(v.value == doctest::Approx(1.0 / (1.8794 * 1.8794 * (1 - 0.999 * 0.999))).epsilon(1e-12));
  for (int p = 1; p <= 3; ++p) {
    for (double r : {-1.9, -0.7, 0.4, 1.5}) {
      const double q = r > 0 ? 1.0 : 0.0;
      const double ref = q / (std::pow(1.8794, 2 * p) - std::pow(r, 2 * p)) +
                         (1 - q) / (std::pow(-2.0, 2 * p) - std::pow(r, 2 * p));
      CHECK(mu(r, 1.8794, -2.0, p).value == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha1_dot matches finite differences along the flow") {
  const double h = 1e-4;
  for (double sig_deg : {15.0, 35.0, 60.0, 75.0, -40.0}) {
    for (double r : {10000.0, 2500.0, 400.0}) {
      for (double a : {0.0, -60.0, 25.0}) {
        Alpha1Oracle o;
        const auto s0 = at(oracle::rad(sig_deg), r, 4.0);
        const auto sp = advance(s0, a, h);
        const auto sm = advance(s0, a, -h);
        const double fd_full = (o.value(sp.r, sp.sigma, sp.t) - o.value(sm.r, sm.sigma, sm.t)) / (2 * h);

        // Rate of K from the same flow.
        auto K_of = [&](const EngagementState<double>& s) {
          const auto e = error_terms(s, s.t, 42.0, kSigmaMax, kV, TimingGains<double>(3.0));
          return 1.0 + kappa2_bar(e, 1.0).value;
        };
        const double K0 = K_of(s0);
        const double K_dot = (K_of(sp) - K_of(sm)) / (2 * h);
        const auto e0 = error_terms(s0, s0.t, 42.0, kSigmaMax, kV, TimingGains<double>(3.0));

        const double ana = alpha1_dot(s0, kV, kKappa, e0.rho, K0, K_dot, a);
        CHECK(std::abs(ana - fd_full) < 1e-3 * (1.0 + std::abs(ana)));
      }
    }
  }
}

TEST_CASE("backstepping command at launch") {
  // Reference geometry: sigma0 = 60 deg, r0 = 10 km, t_d = 42 s, a_M = 0.
  GuidanceGains<double> g;
  ActuatorConfig<double> act;
  const auto s0 = at(oracle::rad(60));
  const auto e = error_terms(s0, 0.0, 42.0, g.sigma_max, kV, g.timing());
  const auto cmd = blf_command(s0, e, g, act, 0.0, kV, 0.0);

  // Independent evaluation: alpha1 at launch, its rate by centered
  // differences along the unforced flow with kappa2_bar held fixed.
  Alpha1Oracle o;
  const double a1 = o.value(s0.r, s0.sigma, 0.0);
  const double k2 = 1.05840;
  o.freeze_K = true;
  o.K_frozen = 1.0 + std::sqrt(1.0 + std::pow(e.rho1_dot / e.rho1, 2) + std::pow(e.rho2_dot / e.rho2, 2));
  const double h = 1e-4;
  const auto sp = advance(s0, 0.0, h), sm = advance(s0, 0.0, -h);
  const double a1_dot = (o.value(sp.r, sp.sigma, sp.t) - o.value(sm.r, sm.sigma, sm.t)) / (2 * h);
  const double mu0 = 1.0 / (e.rho1 * e.rho1 - 1.0);
  const double G = oracle::G_p(s0.r, s0.sigma, kV, kKappa);
  const double expected = a1_dot - mu0 * G * 1.0 - (0.0 - a1);

  CHECK(cmd.diag.kappa2_bar == doctest::Approx(k2).epsilon(1e-5));
  CHECK(cmd.diag.alpha1 == doctest::Approx(-187.34).epsilon(1e-4));
  CHECK(cmd.diag.z2_bar == doctest::Approx(187.34).epsilon(1e-4));
  CHECK(cmd.diag.mu == doctest::Approx(0.39491).epsilon(1e-4));
  CHECK(cmd.diag.alpha1_dot == doctest::Approx(a1_dot).epsilon(1e-6));
  CHECK(cmd.command == doctest::Approx(expected).epsilon(1e-6));
  CHECK(cmd.command == cmd.numerator);
}

TEST_CASE("backstepping command vanishes at equilibrium") {
  GuidanceGains<double> g;
  ActuatorConfig<double> act;
  act.rho = 0.0;
  // sigma in the singular band gives alpha1 = alpha1_dot = 0; rho = 0 by choice of t.
  const auto s = at(0.0, 5000.0, 0.0);
  const auto e0 = error_terms(s, 0.0, 20.0, g.sigma_max, kV, g.timing());
  CHECK(e0.rho == 0.0);
  const auto cmd = blf_command(s, e0, g, act, 0.0, kV, 0.0);
  CHECK(cmd.command == 0.0);
}

TEST_CASE("proportional navigation and deviated pursuit") {
  CHECK(png_command(at(0.0), kV, 3.0) == 0.0);
  CHECK(png_command(at(oracle::rad(60)), kV, 3.0) == doctest::Approx(-16.238).epsilon(1e-4));
  for (int i = -8; i <= 8; ++i) {
    if (i == 0) continue;
    const double a = png_command(at(0.15 * i), kV, 3.0);
    CHECK((a < 0) == (i > 0));
  }
  CHECK(deviated_pursuit_command(at(0.0), kV) == 0.0);
  CHECK(deviated_pursuit_command(at(oracle::rad(65)), kV) == doctest::Approx(-5.6649).epsilon(1e-4));
  CHECK_THROWS_AS(png_command(at(0.1, 0.0), kV, 3.0), DomainError);
}

TEST_CASE("LOS acceleration") {
  const auto s = at(oracle::rad(65));
  CHECK(los_accel(s, kV, 0.0) == doctest::Approx(-4.78773e-4).epsilon(1e-5));
}

TEST_CASE("signed power and sliding surface") {
  CHECK(spow(-8.0, 1.0 / 3.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(spow(0.5, 11.0 / 9.0) == doctest::Approx(0.42864).epsilon(1e-4));
  for (double x : {0.1, 0.7, 3.0}) CHECK(spow(-x, 1.2) == -spow(x, 1.2));
  CHECK(spow(0.0, 0.5) == 0.0);
  CHECK(sliding_surface(0.0, 0.0, 1.0, 11, 9) == 0.0);
  CHECK(sliding_surface(0.1, 0.05, 1.0, 11, 9) == doctest::Approx(0.1 + std::pow(0.05, 11.0 / 9.0)).epsilon(1e-14));
  CHECK(std::abs(sliding_surface(0.1, 0.05, 1.0, 11, 9) - 0.125695) < 1e-6);
  // On the surface the error and its rate have opposite signs.
  const double e_dot = 0.02;
  const double e = -spow(e_dot, 11.0 / 9.0);
  CHECK(sliding_surface(e, e_dot, 1.0, 11, 9) == doctest::Approx(0.0));
  CHECK(e * e_dot < 0.0);
}

TEST_CASE("boundary-layer sign") {
  CHECK(sgn_smooth(0.5, 0.01) == 1.0);
  CHECK(sgn_smooth(-0.01, 0.01) == -1.0);
  CHECK(sgn_smooth(0.005, 0.01) == doctest::Approx(0.5));
  CHECK(sgn_smooth(0.0, 0.01) == 0.0);
  CHECK(sgn_smooth(1e-9, 0.0) == 1.0);
}

TEST_CASE("sliding-mode command on the surface reduces to LOS-rate tracking") {
  GuidanceGains<double> g;
  ActuatorConfig<double> act;
  act.rho = 0.0;
  auto s = at(g.sigma_d, 8000.0);
  const double a = deviated_pursuit_command(s, kV);  // sigma_e_dot = 0
  const auto out = stage1_command(s, g, act, a, kV);
  CHECK(out.sigma_e == 0.0);
  CHECK(std::abs(out.sigma_e_dot) < 1e-15);
  const double margin = 1.0 - std::pow(a / act.a_max, 2);
  CHECK(out.command == doctest::Approx(kV * los_accel(s, kV, a) / margin).epsilon(1e-9));
}

TEST_CASE("analytic switching time") {
  const double k = kKappa, sd = oracle::rad(65);
  CHECK(switching_time_t1(10000.0, sd, kV, 42.0, k, 0.01) == 0.0);
  const double t55 = switching_time_t1(10000.0, sd, kV, 55.0, k, 0.0);
  CHECK(t55 == doctest::Approx(21.59).epsilon(1e-3));
  const double t56 = switching_time_t1(10000.0, sd, kV, 56.0, k, 0.0);
  const double lambda = 1.0 + std::sin(sd) * std::sin(sd) / k;
  CHECK(t56 - t55 == doctest::Approx(1.0 / (1.0 - lambda * std::cos(sd))).epsilon(1e-9));
  CHECK(t56 - t55 > 1.0);
  CHECK_THROWS_AS(switching_time_t1(10000.0, 0.0, kV, 55.0, k, 0.0), ConfigError);
}

TEST_CASE("gain validation") {
  GuidanceGains<double> g;
  CHECK_NOTHROW(g.validate());
  g.q_f = 8;
  try {
    g.validate();
    FAIL("even q_f accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("odd positive integers") != std::string::npos);
  }
  g.q_f = 9;
  g.p_f = 21;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g.p_f = 11;
  g.sigma_d = g.sigma_max;
  CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("two-stage law switches immediately inside the window") {
  GuidanceGains<double> g;
  GuidanceContext<double> ctx(Law::multi_stage, g, ActuatorConfig<double>{}, kV, 42.0);
  CHECK(ctx.phase() == 1);
  const auto out = ctx.update(at(oracle::rad(60)), 0.0);
  CHECK(out.switched);
  CHECK(ctx.phase() == 2);
  CHECK(*ctx.switch_time() == 0.0);

  GuidanceContext<double> late(Law::multi_stage, g, ActuatorConfig<double>{}, kV, 55.0);
  const auto o2 = late.update(at(oracle::rad(60)), 0.0);
  CHECK_FALSE(o2.switched);
  CHECK(o2.diag.active_stage == ActiveStage::sliding);
}
