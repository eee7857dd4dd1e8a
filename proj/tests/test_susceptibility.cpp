#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mirrordrag/coefficients.hpp"
#include "mirrordrag/error.hpp"
#include "mirrordrag/susceptibility.hpp"
#include "support/oracles.hpp"

using namespace mirrordrag;

namespace {

const LorentzianMirror kLorentzian(1.0);
const PerfectMirror kPerfect;

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(ChiVacuum, PerfectMirrorCubicLaw) {
  const auto r = chi_vacuum(kPerfect, 1.0);
  EXPECT_EQ(r.value.real(), 0.0);
  EXPECT_NEAR(r.value.imag(), 1.0 / (6.0 * pi), 1e-15);
  EXPECT_NEAR(vacuum_cubic_coefficient(kPerfect), 1.0 / (6.0 * pi), 1e-6);
}

TEST(ChiVacuum, ZeroFrequencyVanishes) {
  EXPECT_EQ(chi_vacuum(kLorentzian, 0.0).value, Complex(0.0, 0.0));
  EXPECT_EQ(chi_vacuum(kPerfect, 0.0).value, Complex(0.0, 0.0));
}

TEST(ChiVacuum, LorentzianAgainstTrapezoid) {
  const oracle::Lorentzian o{1.0};
  for (double w : {0.1, 1.0}) {
    auto f = [&](double wp) { return wp * (w - wp) * o.alpha(wp, w - wp); };
    const Complex ref =
        Complex(0.0, 1.0) * oracle::trapezoid(f, 0.0, w, oracle::kTrapezoidPoints) / (2.0 * pi);
    const Complex got = chi_vacuum(kLorentzian, w).value;
    EXPECT_LT(std::abs(got - ref), 1e-8 * std::abs(ref)) << "w=" << w;
  }
}

TEST(ChiVacuum, SmallCutoffTimeApproachesPerfectMirror) {
  // Shrinking tau0 at fixed low frequencies pushes the lorentzian towards r = -1.
  const double target = 1.0 / (6.0 * pi);
  double previous = 1.0;
  for (double tau0 : {1e-1, 1e-2, 1e-3}) {
    const LorentzianMirror m(tau0);
    const double w = 1e-3;
    const double c = chi_vacuum(m, w).value.imag() / (w * w * w);
    const double gap = rel(c, target);
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-2);
}

TEST(ChiVacuum, ReflectionlessMirrorHasNoForce) {
  const RationalMirror clear({{0.0}, {1.0}, {1.0}, {1.0}});
  EXPECT_LT(std::abs(chi_vacuum(clear, 2.0).value), 1e-300);
  EXPECT_EQ(vacuum_cubic_coefficient(clear), 0.0);
  EXPECT_LT(std::abs(chi_thermal_correction(clear, 0.5, Temperature{1.0}).value), 1e-300);
}

TEST(ChiThermal, ZeroFrequencyAndZeroTemperature) {
  EXPECT_EQ(chi_thermal_correction(kLorentzian, 0.0, Temperature{1.0}).value, Complex(0.0, 0.0));
  EXPECT_EQ(chi_thermal_correction(kLorentzian, 1.0, Temperature{0.0}).value, Complex(0.0, 0.0));
  const auto v = chi_total(kLorentzian, 1.0, Temperature{0.0});
  EXPECT_EQ(v.chi_thermal, Complex(0.0, 0.0));
  EXPECT_EQ(v.chi_total, v.chi_vacuum);
  EXPECT_THROW(chi_thermal_correction(kLorentzian, 1.0, Temperature{-1.0}), Error);
}

TEST(ChiThermal, PerfectMirrorSlopeIsViscosity) {
  const Complex d = chi_thermal_correction(kPerfect, 1e-3, Temperature{1.0}).value;
  EXPECT_NEAR(d.imag() / 1e-3, 2.0 * pi / 3.0, 1e-12);
  EXPECT_EQ(d.real(), 0.0);
}

TEST(ChiThermal, LorentzianAgainstTrapezoid) {
  const oracle::Lorentzian o{1.0};
  for (auto [w, t] : {std::pair{0.05, 0.5}, std::pair{0.05, 1.0}, std::pair{2.0, 1.0}}) {
    const Complex ref = oracle::chi_thermal(o, w, t);
    const Complex got = chi_thermal_correction(kLorentzian, w, Temperature{t}).value;
    EXPECT_LT(std::abs(got - ref), 1e-7 * std::abs(ref)) << "w=" << w << " T=" << t;
  }
}

TEST(ChiThermal, ZeroPointVariantNeedsTransparency) {
  try {
    chi_zero_point_correction(kPerfect, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::divergent_bandwidth);
  }
  // Replacing n_T by 1/2 is not the vacuum term: the two differ.
  const auto zp = chi_zero_point_correction(kLorentzian, 1.0);
  const auto vac = chi_vacuum(kLorentzian, 1.0);
  ASSERT_TRUE(std::isfinite(std::abs(zp.value)));
  EXPECT_GT(std::abs(zp.value - vac.value), 10.0 * (zp.error_estimate + vac.error_estimate));
  EXPECT_GT(std::abs(zp.value - vac.value), 1e-3 * std::abs(vac.value));
}

TEST(ChiTotal, VanishesAtZeroFrequency) {
  QuadratureConfig cfg;
  for (const MirrorModel* m : {static_cast<const MirrorModel*>(&kLorentzian),
                               static_cast<const MirrorModel*>(&kPerfect)}) {
    for (double t : {0.0, 1.0}) {
      const auto v = chi_total(*m, 0.0, Temperature{t}, cfg);
      EXPECT_LT(std::abs(v.chi_total), cfg.abs_tol);
    }
  }
  EXPECT_EQ(dissipative_part(kLorentzian, 0.0, Temperature{1.0}), 0.0);
}

TEST(ChiTotal, PerfectMirrorQuasistaticForm) {
  const double w = 0.01;
  const auto v = chi_total(kPerfect, w, Temperature{1.0});
  EXPECT_LT(rel(v.chi_total.imag(), w * 2.0 * pi / 3.0), 1e-4);
  EXPECT_NEAR(dissipative_part(kPerfect, 1.0, Temperature{0.0}), 1.0 / (6.0 * pi), 1e-15);
}

TEST(ChiTotal, ConjugateSymmetry) {
  for (double w : {0.3, 1.7, 6.0}) {
    const Complex p = chi_total(kLorentzian, w, Temperature{0.8}).chi_total;
    const Complex m = chi_total(kLorentzian, -w, Temperature{0.8}).chi_total;
    EXPECT_LT(std::abs(m - std::conj(p)), 1e-9 * std::abs(p)) << w;
  }
}

TEST(Correlation, LimitsOfThePrefactor) {
  const Temperature t{1.0};
  const double w_hi = 60.0;
  const auto hi = correlation_spectrum(kLorentzian, w_hi, t);
  EXPECT_LT(rel(hi.c_spectrum, 2.0 * hi.xi), 1e-15);
  const double w_lo = 1e-4;
  const auto lo = correlation_spectrum(kLorentzian, w_lo, t);
  EXPECT_LT(rel(lo.c_spectrum, 2.0 * t.value / w_lo * lo.xi), 1e-4);
  EXPECT_THROW(correlation_spectrum(kLorentzian, 0.0, t), Error);
  EXPECT_THROW(correlation_spectrum(kLorentzian, 1.0, Temperature{0.0}), Error);
}

TEST(Correlation, PerfectMirrorLowFrequency) {
  const auto c = correlation_spectrum(kPerfect, 0.01, Temperature{1.0});
  EXPECT_LT(rel(c.c_spectrum, 4.0 * pi / 3.0), 1e-2);
  EXPECT_LT(rel(correlation_zero_frequency(kPerfect, Temperature{1.0}), 4.0 * pi / 3.0), 1e-8);
}

TEST(Correlation, ZeroFrequencyMatchesViscosity) {
  const double lam = lambda_spectral(kLorentzian, Temperature{1.0}).value;
  EXPECT_LT(rel(correlation_zero_frequency(kLorentzian, Temperature{1.0}), 2.0 * lam), 1e-4);
}

TEST(Correlation, ZeroFrequencyLowTemperatureScaling) {
  // C[0] = 2 T lambda with lambda ~ 2 pi T^2 / 3: cubic in T at low temperature.
  const double c1 = correlation_zero_frequency(kLorentzian, Temperature{1e-3});
  const double c2 = correlation_zero_frequency(kLorentzian, Temperature{1e-2});
  EXPECT_NEAR(std::log10(c2 / c1), 3.0, 0.05);
  EXPECT_LT(rel(c1, 2e-3 * 2.0 * pi * 1e-6 / 3.0), 1e-2);
}

TEST(LowFrequency, ExpansionMatchesCoefficients) {
  for (double t : {0.1, 1.0, 10.0}) {
    const auto lf = low_frequency_expansion(kLorentzian, Temperature{t});
    const auto rep = compute_coefficients(kLorentzian, Temperature{t});
    EXPECT_LT(rel(lf.lambda, rep.lambda_entropic), 1e-6) << t;
    EXPECT_LT(rel(lf.mu, rep.mu_entropic), 1e-4) << t;
  }
}

TEST(LowFrequency, LadderHalvesFrequency) {
  const auto l = low_frequency_ladder(0.1);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l.front(), 0.1);
  for (std::size_t k = 1; k < l.size(); ++k) EXPECT_EQ(l[k], 0.5 * l[k - 1]);
}

TEST(KramersKronig, LorentzianWindowConverges) {
  const auto narrow =
      kramers_kronig_check(kLorentzian, Temperature{1.0}, UniformGrid::linspace(-40, 40, 4096));
  const auto wide =
      kramers_kronig_check(kLorentzian, Temperature{1.0}, UniformGrid::linspace(-80, 80, 8192));
  EXPECT_LT(narrow.max_discrepancy, 1e-2);
  EXPECT_LT(wide.max_discrepancy, narrow.max_discrepancy);
  EXPECT_TRUE(narrow.symmetric_grid);
  EXPECT_LT(narrow.odd_residual, 1e-8);
  EXPECT_LT(narrow.even_residual, 1e-8);
  EXPECT_GT(narrow.interior_points, 1000u);
}

TEST(KramersKronig, ReflectionlessMirrorIsExact) {
  const RationalMirror clear({{0.0}, {1.0}, {1.0}, {1.0}});
  const auto r =
      kramers_kronig_check(clear, Temperature{0.0}, UniformGrid::linspace(-10, 10, 257));
  EXPECT_EQ(r.max_discrepancy, 0.0);
}

TEST(KramersKronig, RejectsCoarseGridsAndPerfectMirror) {
  try {
    kramers_kronig_check(kLorentzian, Temperature{1.0}, UniformGrid::linspace(-4, 4, 16));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::grid_too_coarse);
  }
  EXPECT_THROW(
      kramers_kronig_check(kPerfect, Temperature{1.0}, UniformGrid::linspace(-4, 4, 128)), Error);
}
