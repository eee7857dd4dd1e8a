#pragma once

// Adaptive Gauss-Kronrod integration over finite, Bose-weighted and
// semi-infinite ranges, finite-difference derivatives, limit extrapolation and
// a discrete principal-value Hilbert transform.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mirrordrag/physics.hpp"

namespace mirrordrag {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_subdivisions = 200;

  void check() const;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  // False when max_subdivisions was hit before the tolerance; value is the best estimate.
  bool converged = true;
};

using RealIntegrand = std::function<double(double)>;
using ComplexIntegrand = std::function<Complex(double)>;

QuadratureResult<Complex> integrate_finite(const ComplexIntegrand& f, double lo, double hi,
                                           const QuadratureConfig& cfg,
                                           std::span<const double> breakpoints = {});
QuadratureResult<double> integrate_finite(const RealIntegrand& f, double lo, double hi,
                                          const QuadratureConfig& cfg,
                                          std::span<const double> breakpoints = {});

enum class ThermalWeight {
  occupation,               // n_T[omega]
  occupation_temp_derivative,  // d n_T[omega] / dT
};

struct ThermalOptions {
  ThermalWeight weight = ThermalWeight::occupation;
  // |f(omega)| <= M (1 + x^p) with x = omega / T is assumed beyond the sampled range.
  int growth_power = 3;
  // Frequencies where the integrand has structure (e.g. the reflection cutoff).
  std::vector<double> breakpoints;
};

// Integral over (0, inf) of f(omega) times the thermal weight. The range is
// mapped to x = omega / T and truncated where the weighted tail drops below
// tolerance. The 1/2pi normalisation is left to the caller.
QuadratureResult<Complex> integrate_thermal(const ComplexIntegrand& f, Temperature temp,
                                            const QuadratureConfig& cfg,
                                            const ThermalOptions& opts = {});
QuadratureResult<double> integrate_thermal(const RealIntegrand& f, Temperature temp,
                                           const QuadratureConfig& cfg,
                                           const ThermalOptions& opts = {});

// Integral over (0, inf) of an integrand decaying at least like 1/omega^2,
// through omega = scale * t / (1 - t).
QuadratureResult<Complex> integrate_semi_infinite(const ComplexIntegrand& f, double scale,
                                                  const QuadratureConfig& cfg);
QuadratureResult<double> integrate_semi_infinite(const RealIntegrand& f, double scale,
                                                 const QuadratureConfig& cfg);

// Central difference with step scale * rel_step and one Richardson level.
template <typename F>
auto differentiate(F&& f, double x, double scale, double rel_step = 1e-6) {
  const double h = scale * rel_step;
  const auto d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const auto d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

// Second derivative by the three-point stencil plus one Richardson level.
template <typename F>
auto second_derivative(F&& f, double x, double scale, double rel_step = 1e-3) {
  const double h = scale * rel_step;
  const auto f0 = f(x);
  const auto d1 = (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
  const double g = 0.5 * h;
  const auto d2 = (f(x + g) - 2.0 * f0 + f(x - g)) / (g * g);
  return (4.0 * d2 - d1) / 3.0;
}

struct ExtrapolationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool stable = true;
};

// Neville polynomial extrapolation of samples y(h_k) to h = 0.
ExtrapolationResult extrapolate_to_zero(std::span<const double> h, std::span<const double> y);

struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
  double stop() const { return at(count - 1); }
  static UniformGrid linspace(double lo, double hi, std::size_t count);
};

// (1/pi) PV integral of g(w') / (w' - w_i) over the sampled window, by the
// subtracted trapezoid rule plus the analytic log term for the window ends.
double hilbert_transform_pv(std::span<const double> samples, const UniformGrid& grid,
                            std::size_t index);

}  // namespace mirrordrag
