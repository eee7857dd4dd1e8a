#include "mirrordrag/susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mirrordrag/error.hpp"
#include "parallel.hpp"

namespace mirrordrag {

namespace {

constexpr Complex kI(0.0, 1.0);
constexpr std::size_t kLadderSize = 7;

double ladder_start(const MirrorModel& model, Temperature temp) {
  double start = std::min(1.0, model.reference_frequency());
  if (temp.value > 0.0) start = std::min(start, temp.value);
  return 0.1 * start;
}

ExtrapolationResult extrapolate_or_throw(std::span<const double> h, std::span<const double> y,
                                         const char* what) {
  ExtrapolationResult r = extrapolate_to_zero(h, y);
  if (!r.stable) {
    throw Error(ErrorCode::extrapolation_unstable,
                std::string(what) + ": successive estimates do not contract");
  }
  return r;
}

std::vector<double> squares(std::span<const double> w) {
  std::vector<double> out;
  out.reserve(w.size());
  for (double v : w) out.push_back(v * v);
  return out;
}

// Thermal kernel w'((w - w') alpha[w', w - w'] + (w + w') alpha[-w', w + w']).
Complex thermal_kernel(const MirrorModel& model, double omega, double wp) {
  return wp * ((omega - wp) * alpha_kernel(model, wp, omega - wp) +
               (omega + wp) * alpha_kernel(model, -wp, omega + wp));
}

}  // namespace

QuadratureResult<Complex> chi_vacuum(const MirrorModel& model, double omega,
                                     const QuadratureConfig& cfg) {
  QuadratureResult<Complex> out;
  if (omega == 0.0) return out;
  const double w3 = omega * omega * omega;
  if (model.perfect_reflector()) {
    out.value = kI * w3 / (6.0 * pi);
    return out;
  }
  // w' = w u maps the range onto [0, 1].
  auto f = [&](double u) { return u * (1.0 - u) * alpha_kernel(model, omega * u, omega * (1.0 - u)); };
  std::vector<double> breaks;
  const double edge = model.reference_frequency() / std::abs(omega);
  if (edge < 0.5) {
    breaks = {edge, 1.0 - edge};
  }
  auto r = integrate_finite(ComplexIntegrand(f), 0.0, 1.0, cfg, breaks);
  const double scale = std::abs(w3) / (2.0 * pi);
  out = r;
  out.value = kI * r.value * (w3 / (2.0 * pi));
  out.error_estimate = r.error_estimate * scale;
  return out;
}

QuadratureResult<Complex> chi_thermal_correction(const MirrorModel& model, double omega,
                                                 Temperature temp, const QuadratureConfig& cfg) {
  if (temp.value < 0.0) throw Error(ErrorCode::domain, "chi_thermal_correction: T < 0");
  QuadratureResult<Complex> out;
  if (temp.is_zero() || omega == 0.0) return out;
  if (model.perfect_reflector()) {
    // alpha = 2 reduces the integral to the first Bose moment, pi^2 T^2 / 6.
    out.value = kI * omega * (2.0 * pi * temp.value * temp.value / 3.0);
    return out;
  }
  ThermalOptions opts;
  opts.growth_power = 2;
  opts.breakpoints = {std::abs(omega), model.reference_frequency()};
  auto r = integrate_thermal(
      ComplexIntegrand([&](double wp) { return thermal_kernel(model, omega, wp); }), temp, cfg,
      opts);
  out = r;
  out.value = kI * r.value / pi;
  out.error_estimate = r.error_estimate / pi;
  return out;
}

QuadratureResult<Complex> chi_zero_point_correction(const MirrorModel& model, double omega,
                                                    const QuadratureConfig& cfg) {
  if (!model.transparent_at_high_frequency()) {
    throw Error(ErrorCode::divergent_bandwidth,
                "zero-point thermal integral needs a mirror transparent at high frequency");
  }
  // The kernel decays like 1/w'^2 but is assembled from O(w') terms that
  // cancel, so far out it is rounding noise. Integrate to a finite cut and
  // close the range with the 1/w'^2 tail fitted at the cut.
  const double cut = 1e3 * std::max(std::abs(omega), model.reference_frequency());
  ComplexIntegrand f([&](double wp) { return 0.5 * thermal_kernel(model, omega, wp); });
  const double breaks[] = {std::abs(omega), model.reference_frequency()};
  std::vector<double> inside;
  for (double b : breaks) {
    if (b > 0.0 && b < cut) inside.push_back(b);
  }
  auto r = integrate_finite(f, 0.0, cut, cfg, inside);
  const Complex tail = f(cut) * cut;
  r.value = kI * (r.value + tail) / pi;
  r.error_estimate = (r.error_estimate + 1e-3 * std::abs(tail)) / pi;
  return r;
}

SusceptibilityValue chi_total(const MirrorModel& model, double omega, Temperature temp,
                              const QuadratureConfig& cfg) {
  SusceptibilityValue v;
  v.omega = omega;
  const auto vac = chi_vacuum(model, omega, cfg);
  v.chi_vacuum = vac.value;
  v.error_estimate = vac.error_estimate;
  if (!temp.is_zero()) {
    const auto th = chi_thermal_correction(model, omega, temp, cfg);
    v.chi_thermal = th.value;
    v.error_estimate += th.error_estimate;
  }
  v.chi_total = v.chi_vacuum + v.chi_thermal;
  return v;
}

double dissipative_part(const MirrorModel& model, double omega, Temperature temp,
                        const QuadratureConfig& cfg) {
  return chi_total(model, omega, temp, cfg).chi_total.imag();
}

CorrelationValue correlation_spectrum(const MirrorModel& model, double omega, Temperature temp,
                                      const QuadratureConfig& cfg) {
  if (omega == 0.0 || !(temp.value > 0.0)) {
    throw Error(ErrorCode::domain, "correlation_spectrum: requires omega != 0 and T > 0");
  }
  CorrelationValue c;
  c.omega = omega;
  c.xi = dissipative_part(model, omega, temp, cfg);
  c.c_spectrum = 2.0 * c.xi / -std::expm1(-omega / temp.value);
  return c;
}

std::vector<double> low_frequency_ladder(double omega0) {
  std::vector<double> w;
  w.reserve(kLadderSize);
  for (std::size_t k = 0; k < kLadderSize; ++k) w.push_back(std::ldexp(omega0, -static_cast<int>(k)));
  return w;
}

double correlation_zero_frequency(const MirrorModel& model, Temperature temp,
                                  const QuadratureConfig& cfg) {
  if (!(temp.value > 0.0)) throw Error(ErrorCode::domain, "correlation_zero_frequency: T <= 0");
  const auto ladder = low_frequency_ladder(ladder_start(model, temp));
  std::vector<double> values(ladder.size());
  detail::parallel_for(ladder.size(), [&](std::size_t k) {
    values[k] = correlation_spectrum(model, ladder[k], temp, cfg).c_spectrum;
  });
  return extrapolate_or_throw(ladder, values, "correlation_zero_frequency").value;
}

LowFrequencyExpansion low_frequency_expansion(const MirrorModel& model, Temperature temp,
                                              const QuadratureConfig& cfg) {
  const auto ladder = low_frequency_ladder(ladder_start(model, temp));
  std::vector<double> slope(ladder.size());
  std::vector<double> curvature(ladder.size());
  detail::parallel_for(ladder.size(), [&](std::size_t k) {
    const double w = ladder[k];
    const Complex chi = chi_total(model, w, temp, cfg).chi_total;
    slope[k] = chi.imag() / w;
    curvature[k] = chi.real() / (w * w);
  });
  const auto h = squares(ladder);
  const auto lam = extrapolate_or_throw(h, slope, "viscosity from susceptibility");
  const auto mu = extrapolate_or_throw(h, curvature, "mass correction from susceptibility");
  return {lam.value, mu.value, lam.error_estimate, mu.error_estimate};
}

double vacuum_cubic_coefficient(const MirrorModel& model, const QuadratureConfig& cfg) {
  const auto ladder = low_frequency_ladder(ladder_start(model, Temperature{0.0}));
  std::vector<double> values(ladder.size());
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double w = ladder[k];
    values[k] = chi_vacuum(model, w, cfg).value.imag() / (w * w * w);
  }
  return extrapolate_or_throw(squares(ladder), values, "vacuum_cubic_coefficient").value;
}

KramersKronigReport kramers_kronig_check(const MirrorModel& model, Temperature temp,
                                         const UniformGrid& grid, const QuadratureConfig& cfg) {
  constexpr std::size_t kMinPoints = 64;
  if (grid.count < kMinPoints) {
    throw Error(ErrorCode::grid_too_coarse, "kramers_kronig_check: need at least 64 points");
  }
  if (model.perfect_reflector()) {
    throw Error(ErrorCode::domain,
                "kramers_kronig_check: the perfect mirror susceptibility grows like omega^3");
  }
  const std::size_t n = grid.count;
  std::vector<Complex> chi(n);
  detail::parallel_for(n, [&](std::size_t i) {
    chi[i] = chi_total(model, grid.at(i), temp, cfg).chi_total;
  });

  KramersKronigReport report;
  for (const Complex& c : chi) report.peak = std::max(report.peak, std::abs(c));
  if (report.peak == 0.0) return report;

  const double width = grid.stop() - grid.start;
  report.symmetric_grid = std::abs(grid.start + grid.stop()) <= 1e-12 * width;
  if (report.symmetric_grid) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex& a = chi[i];
      const Complex& b = chi[n - 1 - i];
      report.odd_residual = std::max(report.odd_residual, std::abs(a.imag() + b.imag()));
      report.even_residual = std::max(report.even_residual, std::abs(a.real() - b.real()));
    }
    report.odd_residual /= report.peak;
    report.even_residual /= report.peak;
  }

  const auto expansion = low_frequency_expansion(model, temp, cfg);
  report.lambda = expansion.lambda;
  report.mu = expansion.mu;

  // Subtracted dissipative part; points too close to omega = 0 take the
  // average of their neighbours.
  const double tiny = 1e-6 * model.reference_frequency();
  std::vector<double> g(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid.at(i);
    if (std::abs(w) > tiny) g[i] = (chi[i].imag() - report.lambda * w) / (w * w * w);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(g[i])) continue;
    const double left = i > 0 ? g[i - 1] : g[i + 1];
    const double right = i + 1 < n ? g[i + 1] : g[i - 1];
    g[i] = 0.5 * (left + right);
  }
  double g_peak = 0.0;
  for (double v : g) g_peak = std::max(g_peak, std::abs(v));
  report.window_warning = std::max(std::abs(g.front()), std::abs(g.back())) >= 1e-3 * g_peak;

  const double centre = 0.5 * (grid.start + grid.stop());
  std::vector<std::size_t> interior;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::abs(grid.at(i) - centre) <= 0.25 * width) interior.push_back(i);
  }
  report.interior_points = interior.size();
  std::vector<double> discrepancy(interior.size());
  detail::parallel_for(interior.size(), [&](std::size_t k) {
    const std::size_t i = interior[k];
    const double w = grid.at(i);
    const double rebuilt = report.mu * w * w + w * w * w * hilbert_transform_pv(g, grid, i);
    discrepancy[k] = std::abs(rebuilt - chi[i].real());
  });
  for (std::size_t k = 0; k < interior.size(); ++k) {
    if (discrepancy[k] > report.max_discrepancy) {
      report.max_discrepancy = discrepancy[k];
      report.worst_omega = grid.at(interior[k]);
    }
  }
  report.max_discrepancy /= report.peak;
  return report;
}

}  // namespace mirrordrag
