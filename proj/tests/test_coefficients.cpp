#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mirrordrag/coefficients.hpp"
#include "mirrordrag/error.hpp"
#include "support/oracles.hpp"

using namespace mirrordrag;

namespace {

const LorentzianMirror kLorentzian(1.0);
const PerfectMirror kPerfect;

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(EnergyFlux, PerfectMirror) {
  EXPECT_LT(rel(energy_flux_A(kPerfect, Temperature{1.0}).value, pi / 6.0), 1e-10);
}

TEST(EnergyFlux, LorentzianLimits) {
  EXPECT_LT(rel(energy_flux_A(kLorentzian, Temperature{0.01}).value, pi * 1e-4 / 6.0), 1e-2);
  EXPECT_LT(rel(energy_flux_A(kLorentzian, Temperature{100.0}).value, 50.0), 2e-2);
}

TEST(StockedQuantity, Limits) {
  EXPECT_EQ(stocked_quantity_B(kPerfect, Temperature{3.0}).value, 0.0);
  EXPECT_LT(std::abs(stocked_quantity_B(kLorentzian, Temperature{100.0}).value), 0.02 * 100.0);
  EXPECT_LT(rel(stocked_quantity_B(kLorentzian, Temperature{0.01}).value, -pi * 1e-4 / 6.0), 2e-2);
}

TEST(LambdaSpectral, PerfectMirror) {
  for (double t : {0.1, 1.0, 10.0}) {
    const double exact = 2.0 * pi * t * t / 3.0;
    EXPECT_LT(rel(lambda_spectral(kPerfect, Temperature{t}).value, exact), 1e-8) << t;
    EXPECT_LT(rel(lambda_entropic(kPerfect, Temperature{t}).value, exact), 1e-8) << t;
  }
}

TEST(LambdaSpectral, LorentzianLimits) {
  const double t_lo = 1e-4;
  EXPECT_LT(rel(lambda_spectral(kLorentzian, Temperature{t_lo}).value, 2.0 * pi * t_lo * t_lo / 3.0),
            1e-2);
  EXPECT_LT(rel(lambda_spectral(kLorentzian, Temperature{100.0}).value, 100.0), 2e-2);
}

TEST(LambdaEntropic, QuadraticAtLowTemperature) {
  const double a = lambda_entropic(kLorentzian, Temperature{1e-3}).value / 1e-6;
  const double b = lambda_entropic(kLorentzian, Temperature{5e-4}).value / 2.5e-7;
  EXPECT_LT(rel(a, b), 1e-2);
}

TEST(MuSpectral, PerfectMirrorVanishes) {
  for (double t : {0.1, 1.0, 10.0}) {
    EXPECT_LT(std::abs(mu_spectral(kPerfect, Temperature{t}).value), 1e-12 * t * t);
    EXPECT_LT(std::abs(mu_entropic(kPerfect, Temperature{t}).value), 1e-12 * t * t);
  }
}

TEST(MuSpectral, LorentzianLimits) {
  EXPECT_LT(rel(mu_spectral(kLorentzian, Temperature{0.01}).value, -pi * 1e-4 / 3.0), 2e-2);
  EXPECT_LT(std::abs(mu_spectral(kLorentzian, Temperature{100.0}).value), 0.01 * 100.0);
}

TEST(MuEntropic, LowTemperatureLawForLongerDelay) {
  const LorentzianMirror m(2.0);
  const double t = 0.005;
  const double mu1 = mu_entropic(m, Temperature{t}).value;
  const double mu2 = mu_entropic(m, Temperature{0.5 * t}).value;
  EXPECT_LT(rel(mu1 / mu2, 4.0), 1e-2);
  EXPECT_LT(rel(mu1, -pi * 2.0 * t * t / 3.0), 2e-2);
}

TEST(Coefficients, MatchTrapezoidOracle) {
  const oracle::Lorentzian o{1.0};
  const double lam = oracle::lambda_spectral(o, 1.0);
  const double mu = oracle::mu_spectral(o, 1.0);
  const auto rep = compute_coefficients(kLorentzian, Temperature{1.0});
  EXPECT_LT(rel(rep.lambda_spectral, lam), 1e-7);
  EXPECT_LT(rel(rep.lambda_entropic, lam), 1e-7);
  EXPECT_LT(rel(rep.mu_spectral, mu), 1e-7);
  EXPECT_LT(rel(rep.mu_entropic, mu), 1e-7);
}

TEST(Coefficients, DualRoutesAgree) {
  for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const auto r = compute_coefficients(kLorentzian, Temperature{t});
    EXPECT_TRUE(r.converged) << t;
    EXPECT_LT(r.route_discrepancy_lambda, 1e-6) << t;
    EXPECT_LT(r.route_discrepancy_mu, 1e-6) << t;
    EXPECT_EQ(r.temp, t);
  }
}

TEST(Coefficients, FlippedBOnlyBreaksMu) {
  CoefficientHooks hooks;
  hooks.flip_b_in_spectral_route = true;
  const auto r = compute_coefficients(kLorentzian, Temperature{1.0}, {}, hooks);
  EXPECT_LT(r.route_discrepancy_lambda, 1e-6);
  EXPECT_GT(r.route_discrepancy_mu, 0.5);
}

TEST(Coefficients, RejectNonPositiveTemperature) {
  EXPECT_THROW(compute_coefficients(kLorentzian, Temperature{0.0}), Error);
  EXPECT_THROW(lambda_spectral(kLorentzian, Temperature{-1.0}), Error);
}

TEST(RelativeDiscrepancy, Definition) {
  EXPECT_EQ(relative_discrepancy(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_discrepancy(1.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(relative_discrepancy(-2.0, 2.0), 2.0);
}

TEST(TemperatureSweep, KeepsInputOrderAndMatchesSingleCalls) {
  const std::vector<double> temps = {3.0, 0.2, 1.0};
  const auto rows = temperature_sweep(kLorentzian, temps);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const auto single = compute_coefficients(kLorentzian, Temperature{temps[i]});
    EXPECT_EQ(rows[i].temp, temps[i]);
    EXPECT_EQ(rows[i].lambda_spectral, single.lambda_spectral);
    EXPECT_EQ(rows[i].mu_entropic, single.mu_entropic);
  }
}

TEST(TemperatureSweep, LogLogSlopes) {
  auto slope = [](double t1, double t2) {
    const double l1 = lambda_spectral(kLorentzian, Temperature{t1}).value;
    const double l2 = lambda_spectral(kLorentzian, Temperature{t2}).value;
    return std::log(l2 / l1) / std::log(t2 / t1);
  };
  EXPECT_NEAR(slope(1e-3, 1e-2), 2.0, 0.05);
  EXPECT_NEAR(slope(1e2, 1e3), 1.0, 0.05);
}

TEST(DopplerFactor, CrossoverFromFourToTwo) {
  for (auto [t, lo, hi] : {std::tuple{1e-3, 3.96, 4.04}, std::tuple{100.0, 1.96, 2.04}}) {
    const auto r = compute_coefficients(kLorentzian, Temperature{t});
    const double ratio = r.lambda_spectral / r.energy_flux;
    EXPECT_GE(ratio, lo) << t;
    EXPECT_LE(ratio, hi) << t;
  }
}

TEST(Asymptotics, LorentzianBandwidths) {
  for (double tau0 : {0.5, 1.0, 3.0}) {
    const LorentzianMirror m(tau0);
    const auto a = asymptotics(m, Temperature{1.0});
    EXPECT_LT(rel(a.omega_c_effective, 1.0 / (4.0 * tau0)), 1e-10) << tau0;
    EXPECT_LT(std::abs(a.delta_s), 1e-10) << tau0;
    EXPECT_EQ(a.reflection_r0, 1.0);
    EXPECT_EQ(a.delay_tau0, tau0);
  }
}

TEST(Asymptotics, LawsAtAGivenTemperature) {
  const double t = 0.2;
  const auto a = asymptotics(kLorentzian, Temperature{t});
  EXPECT_DOUBLE_EQ(a.lambda_high_t, 4.0 * t * 0.25);
  EXPECT_DOUBLE_EQ(a.energy_flux_high_t, 2.0 * t * 0.25);
  EXPECT_DOUBLE_EQ(a.lambda_low_t, 2.0 * pi * t * t / 3.0);
  EXPECT_DOUBLE_EQ(a.mu_low_t, -pi * t * t / 3.0);
  EXPECT_DOUBLE_EQ(a.energy_flux_low_t, pi * t * t / 6.0);
}

TEST(Asymptotics, PerfectMirrorHasUnboundedBandwidth) {
  const auto a = asymptotics(kPerfect, Temperature{1.0});
  EXPECT_TRUE(std::isinf(a.omega_c_effective));
  EXPECT_EQ(a.delta_s, 0.0);
}

TEST(Asymptotics, StuckReflectorIsRejected) {
  const CallbackMirror stuck([](double) { return Amplitudes{Complex(-1.0, 0.0), Complex(0.0, 0.0)}; },
                             std::nullopt, false);
  try {
    asymptotics(stuck, Temperature{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::divergent_bandwidth);
  }
}

TEST(Asymptotics, WeakReflectorDelayIntegral) {
  // r = -g z / D, s = (1 - z^2) / D with D = 1 - 2 c z + z^2 and c^2 = 1 + g^2 / 4:
  // lossless, R small everywhere for small g.
  const double g = 0.1;
  const double c = std::sqrt(1.0 + 0.25 * g * g);
  const RationalMirror m({{0.0, -g}, {1.0, -2.0 * c, 1.0}, {1.0, 0.0, -1.0}, {1.0, -2.0 * c, 1.0}});
  const auto report = validate_model(m, default_validation_grid(m), 1e-12);
  ASSERT_TRUE(report.passed()) << report.describe();
  const auto a = asymptotics(m, Temperature{1.0});
  auto f = [&](double w) { return 2.0 * scattering_delay(m, w) / (2.0 * pi); };
  const double delay_only = integrate_semi_infinite(RealIntegrand(f), 1.0, QuadratureConfig{}).value;
  EXPECT_LT(rel(a.delta_s, delay_only), 1e-2);
  EXPECT_LT(a.omega_c_effective, 1e-2);
}

TEST(QuasistaticForm, UniformVelocity) {
  CoefficientReport rep;
  rep.lambda_spectral = 2.5;
  rep.mu_spectral = -0.7;
  std::vector<TrajectoryPoint> traj;
  for (int i = 0; i < 11; ++i) traj.push_back({0.1 * i, 3.0 * 0.1 * i});
  const auto s = quasistatic_force(rep, traj);
  ASSERT_EQ(s.points.size(), 9u);
  for (const auto& p : s.points) EXPECT_NEAR(p.force, -2.5 * 3.0, 1e-12);
  EXPECT_NEAR(s.points.front().t, 0.1, 1e-15);
}

TEST(QuasistaticForm, UniformAcceleration) {
  CoefficientReport rep;
  rep.lambda_spectral = 1.3;
  rep.mu_spectral = -0.4;
  const double g = 9.0;
  std::vector<TrajectoryPoint> traj;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.05 * i;
    traj.push_back({t, 0.5 * g * t * t});
  }
  const auto s = quasistatic_force(rep, traj);
  for (const auto& p : s.points) {
    EXPECT_NEAR(p.force, -1.3 * g * p.t - (-0.4) * g, 1e-10) << p.t;
  }
}

TEST(QuasistaticForm, ZeroTrajectoryAndBadInput) {
  CoefficientReport rep;
  rep.lambda_spectral = 1.0;
  rep.mu_spectral = 1.0;
  std::vector<TrajectoryPoint> zero = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  for (const auto& p : quasistatic_force(rep, zero).points) EXPECT_EQ(p.force, 0.0);

  std::vector<TrajectoryPoint> two = {{0, 0}, {1, 1}};
  try {
    quasistatic_force(rep, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::grid_too_coarse);
  }
  std::vector<TrajectoryPoint> uneven = {{0, 0}, {1, 1}, {3, 2}};
  EXPECT_THROW(quasistatic_force(rep, uneven), Error);
  std::vector<TrajectoryPoint> backwards = {{2, 0}, {1, 1}, {0, 2}};
  EXPECT_THROW(quasistatic_force(rep, backwards), Error);
}

TEST(QuasistaticForm, WarnsForFastMotion) {
  CoefficientReport rep;
  rep.lambda_spectral = 1.0;
  std::vector<TrajectoryPoint> traj;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.01 * i;
    traj.push_back({t, std::sin(20.0 * t)});
  }
  const auto fast = quasistatic_force(rep, traj, 1.0);
  EXPECT_TRUE(fast.quasistatic_warning);
  EXPECT_NEAR(fast.characteristic_rate, 20.0, 1.0);
  EXPECT_FALSE(quasistatic_force(rep, traj, 1e4).quasistatic_warning);
  EXPECT_FALSE(quasistatic_force(rep, traj, 0.0).quasistatic_warning);
}

TEST(Einstein, RelationHolds) {
  EXPECT_LT(einstein_check(kPerfect, Temperature{1.0}).discrepancy, 1e-4);
  for (double t : {0.1, 1.0, 10.0}) {
    EXPECT_LT(einstein_check(kLorentzian, Temperature{t}).discrepancy, 1e-3) << t;
  }
}

TEST(Einstein, DetectsHalvedViscosity) {
  const auto r = einstein_check(kLorentzian, Temperature{1.0}, {}, 0.5);
  EXPECT_NEAR(r.discrepancy, 1.0, 1e-3);
}

TEST(MassBound, HeavyMirrorPasses) {
  const auto r = mass_bound_check(kLorentzian, Temperature{0.01}, 1000.0);
  EXPECT_TRUE(r.mass_ok);
  EXPECT_TRUE(r.cutoff_checked);
  EXPECT_TRUE(r.cutoff_ok);
  EXPECT_FALSE(r.regime_warning);
  EXPECT_NEAR(r.mass_ratio, pi * 1e-4 / 3.0 / 1000.0, 2e-9);
}

TEST(MassBound, LightMirrorFails) {
  const auto r = mass_bound_check(kLorentzian, Temperature{0.01}, 1e-6);
  EXPECT_FALSE(r.cutoff_ok);
  EXPECT_FALSE(r.mass_ok);
}

TEST(MassBound, PerfectMirrorSkipsCutoff) {
  const auto r = mass_bound_check(kPerfect, Temperature{1.0}, 1e-3);
  EXPECT_FALSE(r.cutoff_checked);
  EXPECT_TRUE(r.mass_ok);
  EXPECT_EQ(r.mu, 0.0);
  EXPECT_THROW(mass_bound_check(kPerfect, Temperature{1.0}, 0.0), Error);
}
