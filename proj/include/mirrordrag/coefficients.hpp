#pragma once

// Viscosity coefficient lambda_T and mass correction mu_T of the quasistatic
// expansion chi_T[w] = i w lambda_T + w^2 mu_T + ..., each by two routes:
//
//   spectral:  lambda = (1/pi) int n_T d/dw (w^2 a)      mu = (1/2pi) int n_T d/dw (w^2 b)
//   entropic:  lambda = 2 T dA/dT                         mu = T dB/dT
//
// with A = (1/2pi) int w n_T a and B = (1/2pi) int w n_T b. The entropic
// route differentiates under the integral with the closed-form dn_T/dT.
// Natural units (hbar = c = k_B = 1).

#include <cstddef>
#include <span>
#include <vector>

#include "mirrordrag/models.hpp"
#include "mirrordrag/quadrature.hpp"

namespace mirrordrag {

struct CoefficientReport {
  double temp = 0.0;
  double lambda_spectral = 0.0;
  double lambda_entropic = 0.0;
  double mu_spectral = 0.0;
  double mu_entropic = 0.0;
  double energy_flux = 0.0;       // A(T)
  double stocked_quantity = 0.0;  // B(T)
  double route_discrepancy_lambda = 0.0;
  double route_discrepancy_mu = 0.0;
  double err_lambda = 0.0;
  double err_mu = 0.0;
  double err_energy_flux = 0.0;
  double err_stocked_quantity = 0.0;
  bool converged = true;
};

// Deliberate faults for exercising the cross-checks.
struct CoefficientHooks {
  // Flip the sign of b (and b') in the spectral mu route only.
  bool flip_b_in_spectral_route = false;
};

QuadratureResult<double> energy_flux_A(const MirrorModel& model, Temperature temp,
                                       const QuadratureConfig& cfg = {});
QuadratureResult<double> stocked_quantity_B(const MirrorModel& model, Temperature temp,
                                            const QuadratureConfig& cfg = {});
QuadratureResult<double> lambda_spectral(const MirrorModel& model, Temperature temp,
                                         const QuadratureConfig& cfg = {});
QuadratureResult<double> lambda_entropic(const MirrorModel& model, Temperature temp,
                                         const QuadratureConfig& cfg = {});
QuadratureResult<double> mu_spectral(const MirrorModel& model, Temperature temp,
                                     const QuadratureConfig& cfg = {},
                                     const CoefficientHooks& hooks = {});
QuadratureResult<double> mu_entropic(const MirrorModel& model, Temperature temp,
                                     const QuadratureConfig& cfg = {});

CoefficientReport compute_coefficients(const MirrorModel& model, Temperature temp,
                                       const QuadratureConfig& cfg = {},
                                       const CoefficientHooks& hooks = {});

// Relative difference |x - y| / max(|x|, |y|), zero when both vanish.
double relative_discrepancy(double x, double y);

// Coefficients over a list of temperatures, in input order.
std::vector<CoefficientReport> temperature_sweep(const MirrorModel& model,
                                                 std::span<const double> temps,
                                                 const QuadratureConfig& cfg = {},
                                                 const CoefficientHooks& hooks = {});

struct AsymptoticsReport {
  // Omega_C = (1/2pi) int R; +inf for mirrors without a cutoff.
  double omega_c_effective = 0.0;
  // Delta_S = (1/2pi) int (1 - 2R) 2 tau, dimensionless.
  double delta_s = 0.0;
  double reflection_r0 = 0.0;
  double delay_tau0 = 0.0;
  double temp = 0.0;
  // lambda ~ 4 T Omega_C and mu ~ T Delta_S when T >> omega_C;
  // lambda ~ R0 2 pi T^2 / 3 and mu ~ (1 - 2 R0) tau0 pi T^2 / 3 when T << omega_C.
  double lambda_high_t = 0.0;
  double lambda_low_t = 0.0;
  double mu_high_t = 0.0;
  double mu_low_t = 0.0;
  // A = 2 T Omega_C at high T and A = R0 pi T^2 / 6 at low T.
  double energy_flux_high_t = 0.0;
  double energy_flux_low_t = 0.0;
};

// Throws divergent_bandwidth for mirrors that stay reflecting at high
// frequency (other than the perfect mirror, which reports Omega_C = inf).
AsymptoticsReport asymptotics(const MirrorModel& model, Temperature temp,
                              const QuadratureConfig& cfg = {});

struct TrajectoryPoint {
  double t = 0.0;
  double q = 0.0;
};

struct ForcePoint {
  double t = 0.0;
  double force = 0.0;
};

struct ForceSeries {
  std::vector<ForcePoint> points;
  // Trajectory changes on a timescale not long against 1/omega_C or 1/T.
  bool quasistatic_warning = false;
  double characteristic_rate = 0.0;
};

// delta F = -(lambda q' + mu q'') at interior points, central differences,
// spectral-route coefficients. validity_rate <= 0 disables the warning.
ForceSeries quasistatic_force(const CoefficientReport& report,
                              std::span<const TrajectoryPoint> trajectory,
                              double validity_rate = 0.0);

struct EinsteinReport {
  double half_c_zero = 0.0;  // C_T[0] / 2
  double t_lambda = 0.0;     // T lambda_T
  double discrepancy = 0.0;  // |C/2 - T lambda| / (T lambda)
};

// lambda_scale multiplies the spectral lambda before comparison.
EinsteinReport einstein_check(const MirrorModel& model, Temperature temp,
                              const QuadratureConfig& cfg = {}, double lambda_scale = 1.0);

struct MassBoundReport {
  bool cutoff_checked = false;
  double cutoff_ratio = 0.0;  // omega_C / m (natural units: hbar omega_C / m c^2)
  bool cutoff_ok = true;      // cutoff_ratio < 0.01
  double mass_ratio = 0.0;    // |mu_T| / m
  bool mass_ok = true;
  bool regime_warning = false;  // T >= omega_C, outside the low-temperature regime
  double mu = 0.0;
};

MassBoundReport mass_bound_check(const MirrorModel& model, Temperature temp, double mirror_mass,
                                 const QuadratureConfig& cfg = {});

}  // namespace mirrordrag
