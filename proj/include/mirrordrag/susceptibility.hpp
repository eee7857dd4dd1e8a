#pragma once

// Motional susceptibility chi_T[omega] of a mirror in a thermal scalar field,
// computed as the vacuum part chi_0 plus the thermal correction delta chi_T,
// together with the fluctuation-dissipation spectrum and a dispersion
// relation check. Natural units throughout.

#include <cstddef>
#include <optional>

#include "mirrordrag/models.hpp"
#include "mirrordrag/quadrature.hpp"

namespace mirrordrag {

struct SusceptibilityValue {
  double omega = 0.0;
  Complex chi_vacuum{};
  Complex chi_thermal{};
  Complex chi_total{};
  double error_estimate = 0.0;
};

struct CorrelationValue {
  double omega = 0.0;
  double c_spectrum = 0.0;
  double xi = 0.0;
};

// chi_0[w] = (i/2pi) int_0^w dw' w'(w - w') alpha[w', w - w'].
QuadratureResult<Complex> chi_vacuum(const MirrorModel& model, double omega,
                                     const QuadratureConfig& cfg = {});

// delta chi_T[w] = (i/pi) int_0^inf dw' w' n_T[w'] ((w - w') alpha[w', w - w']
//                                                  + (w + w') alpha[-w', w + w']).
QuadratureResult<Complex> chi_thermal_correction(const MirrorModel& model, double omega,
                                                 Temperature temp,
                                                 const QuadratureConfig& cfg = {});

// Same integral with n_T replaced by the zero-point value 1/2. Differs from
// chi_vacuum; only defined for mirrors transparent at high frequency.
QuadratureResult<Complex> chi_zero_point_correction(const MirrorModel& model, double omega,
                                                    const QuadratureConfig& cfg = {});

SusceptibilityValue chi_total(const MirrorModel& model, double omega, Temperature temp,
                              const QuadratureConfig& cfg = {});

// xi_T[omega] = Im chi_T[omega].
double dissipative_part(const MirrorModel& model, double omega, Temperature temp,
                        const QuadratureConfig& cfg = {});

// C_T[w] = 2 xi_T[w] / (1 - exp(-w/T)), for w != 0 and T > 0.
CorrelationValue correlation_spectrum(const MirrorModel& model, double omega, Temperature temp,
                                      const QuadratureConfig& cfg = {});

// Frequencies omega0 / 2^k, k = 0..6, used for omega -> 0 limits.
std::vector<double> low_frequency_ladder(double omega0);

// C_T[0] by extrapolation of C_T along the low-frequency ladder.
double correlation_zero_frequency(const MirrorModel& model, Temperature temp,
                                  const QuadratureConfig& cfg = {});

// Quasistatic coefficients read off the susceptibility: lambda = lim xi/omega
// and mu = lim Re chi / omega^2.
struct LowFrequencyExpansion {
  double lambda = 0.0;
  double mu = 0.0;
  double lambda_error = 0.0;
  double mu_error = 0.0;
};
LowFrequencyExpansion low_frequency_expansion(const MirrorModel& model, Temperature temp,
                                              const QuadratureConfig& cfg = {});

// Coefficient of omega^3 in Im chi_0 at low frequency.
double vacuum_cubic_coefficient(const MirrorModel& model, const QuadratureConfig& cfg = {});

struct KramersKronigReport {
  // max |Re chi - reconstruction| on the interior half of the window, relative
  // to the peak |chi| over the whole grid.
  double max_discrepancy = 0.0;
  double worst_omega = 0.0;
  // Symmetry residuals of the samples (xi odd, Re chi even), relative to peak |chi|.
  double odd_residual = 0.0;
  double even_residual = 0.0;
  bool symmetric_grid = false;
  // Subtracted integrand not yet small at the window ends.
  bool window_warning = false;
  std::size_t interior_points = 0;
  double peak = 0.0;
  // Subtraction constants used at omega = 0.
  double lambda = 0.0;
  double mu = 0.0;
};

// Dispersion-relation check: Re chi_T reconstructed from xi_T alone through a
// Hilbert transform subtracted three times at omega = 0,
//   Re chi(w) = mu w^2 + w^3 H[(xi - lambda w) / w^3](w).
KramersKronigReport kramers_kronig_check(const MirrorModel& model, Temperature temp,
                                         const UniformGrid& grid,
                                         const QuadratureConfig& cfg = {});

}  // namespace mirrordrag
