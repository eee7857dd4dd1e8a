#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "mirrordrag/error.hpp"
#include "mirrordrag/physics.hpp"

using namespace mirrordrag;

namespace {

void expect_code(ErrorCode code, const std::function<void()>& body) {
  try {
    body();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(BoseOccupation, MatchesDefinition) {
  const Temperature t{2.0};
  for (double w : {0.01, 0.5, 1.0, 3.0, 40.0}) {
    EXPECT_NEAR(bose_occupation(w, t), 1.0 / std::expm1(w / 2.0),
                1e-14 * bose_occupation(w, t));
  }
}

TEST(BoseOccupation, ClassicalLimitIsTOverOmega) {
  const Temperature t{1.0};
  const double w = 1e-10;
  EXPECT_NEAR(bose_occupation(w, t) * w, 1.0, 1e-9);
}

TEST(BoseOccupation, SeriesBranchJoinsSmoothly) {
  // Either side of the switch to the Laurent expansion.
  const double below = bose_occupation_reduced(0.999e-8);
  const double above = bose_occupation_reduced(1.001e-8);
  EXPECT_NEAR(below * 0.999e-8, 1.0, 1e-7);
  EXPECT_NEAR(above * 1.001e-8, 1.0, 1e-7);
  EXPECT_NEAR(bose_temp_derivative_reduced(0.999e-8) * 0.999e-8, 1.0, 1e-7);
  EXPECT_NEAR(bose_temp_derivative_reduced(1.001e-8) * 1.001e-8, 1.0, 1e-7);
}

TEST(BoseOccupation, FlushedToZeroFarInTheTail) {
  EXPECT_EQ(bose_occupation(1000.0, Temperature{1.0}), 0.0);
  EXPECT_EQ(bose_occupation_temp_derivative(1000.0, Temperature{1.0}), 0.0);
  EXPECT_GT(bose_occupation(600.0, Temperature{1.0}), 0.0);
}

TEST(BoseOccupation, RejectsNonPositiveArguments) {
  expect_code(ErrorCode::domain, [] { bose_occupation(0.0, Temperature{1.0}); });
  expect_code(ErrorCode::domain, [] { bose_occupation(1.0, Temperature{0.0}); });
  expect_code(ErrorCode::domain, [] { bose_occupation_temp_derivative(-1.0, Temperature{1.0}); });
}

TEST(BoseOccupation, TemperatureDerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(-2.0, 1.5);
  for (int i = 0; i < 200; ++i) {
    const double w = std::pow(10.0, lg(rng));
    const double t = std::pow(10.0, lg(rng));
    // Deep in the tail n varies like exp(-w/T); keep the step small against T^2/w.
    const double h = 1e-5 * t / std::max(1.0, w / t);
    const double fd =
        (bose_occupation(w, Temperature{t + h}) - bose_occupation(w, Temperature{t - h})) / (2 * h);
    const double exact = bose_occupation_temp_derivative(w, Temperature{t});
    EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact) + 1e-300) << "w=" << w << " T=" << t;
  }
}

TEST(SmoothedSign, IsCothOfHalfReducedFrequency) {
  const Temperature t{0.7};
  for (double w : {-3.0, -0.2, 0.05, 1.0, 9.0}) {
    EXPECT_NEAR(smoothed_sign(w, t), 1.0 / std::tanh(w / (2.0 * 0.7)), 1e-13);
  }
}

TEST(SmoothedSign, ZeroTemperatureIsSign) {
  EXPECT_EQ(smoothed_sign(2.0, Temperature{0.0}), 1.0);
  EXPECT_EQ(smoothed_sign(-2.0, Temperature{0.0}), -1.0);
  expect_code(ErrorCode::domain, [] { smoothed_sign(0.0, Temperature{1.0}); });
}

TEST(UnitSystem, NaturalUnitsAreIdentity) {
  const UnitSystem u = UnitSystem::natural();
  EXPECT_TRUE(u.is_natural());
  for (auto q : {Quantity::energy, Quantity::frequency, Quantity::time, Quantity::mass,
                 Quantity::viscosity, Quantity::power, Quantity::susceptibility,
                 Quantity::spectrum}) {
    EXPECT_EQ(u.to_natural(q, 3.5), 3.5);
  }
}

TEST(UnitSystem, ConversionsRoundTrip) {
  const UnitSystem u(1.0545718e-34, 2.99792458e8);
  for (auto q : {Quantity::energy, Quantity::frequency, Quantity::time, Quantity::mass,
                 Quantity::viscosity, Quantity::power, Quantity::susceptibility,
                 Quantity::spectrum}) {
    const double v = 0.123;
    EXPECT_NEAR(u.from_natural(q, u.to_natural(q, v)), v, 1e-15);
  }
}

TEST(UnitSystem, FrequencyTimesTimeIsInvariant) {
  const UnitSystem u(0.25, 3.0);
  const double w = 5.0;
  const double t = 0.3;
  EXPECT_NEAR(u.to_natural(Quantity::frequency, w) * u.to_natural(Quantity::time, t), w * t,
              1e-15);
  // lambda v = force and mu a = force must convert alike: viscosity = mass / time.
  EXPECT_NEAR(u.to_natural(Quantity::viscosity, 1.0),
              u.to_natural(Quantity::mass, 1.0) / u.to_natural(Quantity::time, 1.0), 1e-15);
}

TEST(UnitSystem, RejectsNonPositiveConstants) {
  expect_code(ErrorCode::domain, [] { UnitSystem(0.0, 1.0); });
  expect_code(ErrorCode::domain, [] { UnitSystem(1.0, -1.0); });
}

TEST(BoseOccupation, ScalarValues) {
  const Temperature t{1.0};
  EXPECT_NEAR(bose_occupation(std::log(2.0), t), 1.0, 1e-15);
  EXPECT_LT(bose_occupation(50.0, t), 2e-22);
  // 1/(e - 1) from its series sum_k e^{-k}.
  double series = 0.0;
  for (int k = 60; k >= 1; --k) series += std::exp(-static_cast<double>(k));
  EXPECT_NEAR(bose_occupation(1.0, t), series, 1e-15);
  const double e = std::exp(1.0);
  EXPECT_NEAR(bose_occupation_temp_derivative(1.0, t), e / ((e - 1.0) * (e - 1.0)), 1e-15);
  EXPECT_LT(bose_occupation_temp_derivative(700.0, t), 1e-290);
}

TEST(SmoothedSign, KnownValues) {
  EXPECT_NEAR(smoothed_sign(2.0 * std::log(2.0), Temperature{1.0}), 5.0 / 3.0, 1e-15);
  EXPECT_EQ(smoothed_sign(-3.0, Temperature{0.0}), -1.0);
  const double far = smoothed_sign(60.0, Temperature{1.0});
  EXPECT_GE(far, 1.0);
  EXPECT_LT(far - 1.0, 1e-25);
}
