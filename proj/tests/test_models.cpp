#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "mirrordrag/error.hpp"
#include "mirrordrag/models.hpp"
#include "mirrordrag/quadrature.hpp"
#include "support/oracles.hpp"

using namespace mirrordrag;

TEST(ReflectionProbability, Lorentzian) {
  const LorentzianMirror m1(1.0);
  EXPECT_NEAR(reflection_probability(m1, 1.0), 0.5, 1e-15);
  const LorentzianMirror m2(2.0);
  EXPECT_NEAR(reflection_probability(m2, 3.0), 1.0 / 37.0, 1e-15);
  EXPECT_NEAR(reflection_probability(m2, 0.5), 0.5, 1e-15);
}

TEST(ReflectionProbability, PerfectMirrorIsOne) {
  const PerfectMirror m;
  for (double w : {-10.0, 0.0, 1e-5, 7.0}) EXPECT_EQ(reflection_probability(m, w), 1.0);
}

TEST(ScatteringDelay, LorentzianClosedForm) {
  const LorentzianMirror m(1.5);
  EXPECT_NEAR(scattering_delay(m, 0.0), 1.5, 1e-14);
  const LorentzianMirror unit(1.0);
  EXPECT_NEAR(scattering_delay(unit, 1.0), 0.5, 1e-14);
  const oracle::Lorentzian o{1.5};
  for (double w : {-4.0, -0.3, 0.2, 2.0, 30.0}) {
    EXPECT_NEAR(scattering_delay(m, w), o.delay(w), 1e-13 * 1.5);
  }
}

TEST(ScatteringDelay, AgreesWithNumericalPhaseDerivative) {
  // The callback model has no analytic derivatives, so the delay comes from
  // differentiating the unwrapped phase.
  const LorentzianMirror exact(1.0);
  const CallbackMirror numeric([&](double w) { return exact.amplitudes(w); }, 1.0, true);
  for (double w : {0.0, 0.5, 1.0, 3.0}) {
    EXPECT_NEAR(scattering_delay(numeric, w), scattering_delay(exact, w), 1e-8) << w;
  }
}

TEST(ScatteringDelay, PhaseDerivativeAtZeroIsTwiceTau0) {
  const LorentzianMirror m(1.0);
  // The determinant is -1 at w = 0, on the branch cut of arg; measure the
  // phase from there.
  auto phase = [&](double w) { return std::arg(-scattering_determinant(m, w)); };
  EXPECT_NEAR(differentiate(phase, 0.0, 1.0), 2.0, 1e-6);
}

TEST(ScatteringDelay, PerfectMirrorIsZero) {
  const PerfectMirror m;
  EXPECT_EQ(scattering_delay(m, 0.3), 0.0);
  EXPECT_EQ(scattering_delay(m, 100.0), 0.0);
}

TEST(AlphaKernel, PerfectMirrorIsTwo) {
  const PerfectMirror m;
  const Complex a = alpha_kernel(m, 0.3, -2.0);
  EXPECT_EQ(a, Complex(2.0, 0.0));
}

TEST(AlphaKernel, MatchesHandWrittenRationalExpression) {
  const LorentzianMirror m(1.0);
  const oracle::Lorentzian o{1.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double w1 = u(rng);
    const double w2 = u(rng);
    EXPECT_LT(std::abs(alpha_kernel(m, w1, w2) - o.alpha(w1, w2)), 1e-14);
  }
  // At (1, 1): 1 + (1 - i^2) / (1 - i)^2 = 1 + 2 / (-2i) = 1 + i.
  EXPECT_LT(std::abs(alpha_kernel(m, 1.0, 1.0) - Complex(1.0, 1.0)), 1e-15);
  // Antidiagonal reduces to a = 2R.
  for (double w : {0.1, 1.0, 4.0}) {
    const Complex a = alpha_kernel(m, w, -w);
    EXPECT_NEAR(a.real(), 2.0 * o.R(w), 1e-15);
    EXPECT_NEAR(a.imag(), 0.0, 1e-15);
  }
}

TEST(AFunction, KnownValues) {
  EXPECT_EQ(a_function(PerfectMirror{}, 3.0), 2.0);
  const LorentzianMirror m(0.5);
  EXPECT_NEAR(a_function(m, 2.0), 1.0, 1e-15);
}

TEST(BFunction, KnownValues) {
  EXPECT_EQ(b_function(PerfectMirror{}, 3.0), 0.0);
  const LorentzianMirror m(0.5);
  EXPECT_NEAR(b_function(m, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(b_function(m, 2.0), 0.0, 1e-15);
}

TEST(BFunction, DerivativesMatchHandWrittenForms) {
  const LorentzianMirror m(1.3);
  const oracle::Lorentzian o{1.3};
  for (double w : {0.0, 0.2, 0.77, 1.0, 5.0}) {
    EXPECT_NEAR(a_function_derivative(m, w), o.a_prime(w), 1e-13);
    EXPECT_NEAR(b_function(m, w), o.b(w), 1e-13);
    EXPECT_NEAR(b_function_derivative(m, w), o.b_prime(w), 1e-12);
  }
}

TEST(RationalMirror, LorentzianAsRationalMatchesClosedForm) {
  const RationalMirror rational(RationalMirror::lorentzian(0.8));
  const LorentzianMirror closed(0.8);
  EXPECT_TRUE(rational.transparent_at_high_frequency());
  ASSERT_TRUE(rational.cutoff_frequency().has_value());
  EXPECT_NEAR(*rational.cutoff_frequency(), 1.0 / 0.8, 1e-9);
  for (double w : {-3.0, 0.0, 0.4, 1.25, 9.0}) {
    const Amplitudes a = rational.amplitudes(w);
    const Amplitudes b = closed.amplitudes(w);
    EXPECT_LT(std::abs(a.r - b.r), 1e-15);
    EXPECT_LT(std::abs(a.s - b.s), 1e-15);
    const Amplitudes da = *rational.derivatives(w);
    const Amplitudes db = *closed.derivatives(w);
    EXPECT_LT(std::abs(da.r - db.r), 1e-14);
    EXPECT_LT(std::abs(da.s - db.s), 1e-14);
    EXPECT_NEAR(b_function_derivative(rational, w), b_function_derivative(closed, w), 1e-12);
  }
  EXPECT_NEAR(rational.low_frequency_reflection(), 1.0, 1e-12);
  EXPECT_NEAR(rational.low_frequency_delay(), 0.8, 1e-9);
}

TEST(RationalMirror, RejectsDegenerateInput) {
  EXPECT_THROW(RationalMirror({{}, {1.0}, {1.0}, {1.0}}), Error);
  EXPECT_THROW(RationalMirror({{1.0}, {0.0, 0.0}, {1.0}, {1.0}}), Error);
  EXPECT_THROW(RationalMirror({{1.0}, {1.0}, {std::nan("")}, {1.0}}), Error);
}

TEST(RationalMirror, ReflectionlessIsTransparent) {
  const RationalMirror m({{0.0}, {1.0}, {1.0}, {1.0}});
  EXPECT_TRUE(m.transparent_at_high_frequency());
  EXPECT_FALSE(m.cutoff_frequency().has_value());
  EXPECT_EQ(a_function(m, 2.0), 0.0);
}

TEST(LorentzianMirror, RejectsNonPositiveTau) {
  EXPECT_THROW(LorentzianMirror(0.0), Error);
  EXPECT_THROW(LorentzianMirror(-1.0), Error);
}

TEST(ValidateModel, BuiltinsPassTightly) {
  const LorentzianMirror lor(1.0);
  const auto grid = default_validation_grid(lor, 1000);
  ASSERT_EQ(grid.size(), 1000u);
  EXPECT_NEAR(grid.front(), 1e-3, 1e-18);
  EXPECT_NEAR(grid.back(), 1e3, 1e-9);
  const auto r = validate_model(lor, grid, 1e-12);
  EXPECT_TRUE(r.passed()) << r.describe();
  EXPECT_TRUE(r.transparency_checked);

  const PerfectMirror perfect;
  const auto p = validate_model(perfect, default_validation_grid(perfect), 1e-12);
  EXPECT_TRUE(p.passed()) << p.describe();
  EXPECT_FALSE(p.transparency_checked);
}

TEST(ValidateModel, FlagsScaledTransmission) {
  const LorentzianMirror lor(1.0);
  const CallbackMirror bad(
      [&](double w) {
        Amplitudes a = lor.amplitudes(w);
        a.s *= 1.01;
        return a;
      },
      1.0, true);
  const auto grid = default_validation_grid(bad);
  const auto r = validate_model(bad, grid);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.unitarity_norm.value, 1e-3);
  EXPECT_NE(r.describe().find("|s|^2 + |r|^2"), std::string::npos) << r.describe();
  try {
    require_valid(bad, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::validation_failed);
  }
}

TEST(ValidateModel, FlagsBrokenReality) {
  const CallbackMirror bad(
      [](double w) {
        // A real response needs s[-w] = conj(s[w]); an even phase breaks that.
        return Amplitudes{Complex(0.0, 0.0), std::exp(Complex(0.0, std::abs(w)))};
      },
      std::nullopt, true);
  const auto r = validate_model(bad, default_validation_grid(bad));
  EXPECT_GT(r.reality.value, 1e-3);
  EXPECT_FALSE(r.passed());
}

TEST(ValidateModel, FlagsFalseTransparencyClaim) {
  const CallbackMirror stuck([](double) { return Amplitudes{Complex(-1.0, 0.0), Complex(0.0, 0.0)}; },
                             2.0, true);
  const auto r = validate_model(stuck, default_validation_grid(stuck));
  EXPECT_TRUE(r.transparency_checked);
  EXPECT_FALSE(r.passed());
}

TEST(ValidateModel, RejectsEmptyGrid) {
  EXPECT_THROW(validate_model(PerfectMirror{}, std::vector<double>{}), Error);
}

TEST(UnwrappedPhase, ContinuousAcrossBranchCut) {
  // tau0 = 1 lorentzian: Delta = 2 atan(w) + pi, which crosses +-pi at w = 0.
  const LorentzianMirror m(1.0);
  std::vector<double> grid;
  for (int i = -200; i <= 200; ++i) grid.push_back(0.25 * i);
  const auto ph = unwrapped_phase(m, grid);
  ASSERT_EQ(ph.size(), grid.size());
  for (std::size_t i = 1; i < ph.size(); ++i) EXPECT_LT(std::abs(ph[i] - ph[i - 1]), 0.5);
  const double total = ph.back() - ph.front();
  EXPECT_NEAR(total, 2.0 * (std::atan(50.0) - std::atan(-50.0)), 1e-12);
}

TEST(CallbackMirror, RejectsBadConstruction) {
  EXPECT_THROW(CallbackMirror(nullptr, std::nullopt, false), Error);
  EXPECT_THROW(CallbackMirror([](double) { return Amplitudes{}; }, -1.0, true), Error);
}

TEST(CallbackMirror, NumericalKernelsTrackAnalyticOnes) {
  const LorentzianMirror exact(1.0);
  const CallbackMirror numeric([&](double w) { return exact.amplitudes(w); }, 1.0, true);
  for (double w : {0.1, 0.9, 2.5}) {
    EXPECT_NEAR(b_function(numeric, w), b_function(exact, w), 1e-8);
    EXPECT_NEAR(b_function_derivative(numeric, w), b_function_derivative(exact, w), 1e-5);
    EXPECT_NEAR(a_function_derivative(numeric, w), a_function_derivative(exact, w), 1e-8);
  }
}
