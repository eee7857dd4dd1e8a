#pragma once

// Units convention, thermal occupation functions and the shared value types.
//
// Everything below the I/O boundary works in natural units (hbar = c = k_B = 1).
// Temperatures are energies; frequencies, inverse times and masses are all
// measured in the same energy unit.

#include <complex>

namespace mirrordrag {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

struct Temperature {
  double value = 0.0;

  constexpr explicit Temperature(double v = 0.0) : value(v) {}
  constexpr bool is_zero() const { return value == 0.0; }
};

// Physical quantity families that cross the I/O boundary.
enum class Quantity {
  energy,          // temperature, B(T), hbar*omega
  frequency,       // omega, Omega_C
  time,            // tau0, trajectory time
  mass,            // mu_T, mirror mass
  viscosity,       // lambda_T (mass / time)
  power,           // A(T)
  susceptibility,  // chi_T (force / length)
  spectrum,        // C_T (force^2 * time)
};

// Values of hbar and c defining the user-facing units. k_B is fixed to one.
class UnitSystem {
 public:
  constexpr UnitSystem() = default;
  UnitSystem(double hbar, double c);

  static constexpr UnitSystem natural() { return UnitSystem{}; }

  double hbar() const { return hbar_; }
  double c() const { return c_; }
  bool is_natural() const { return hbar_ == 1.0 && c_ == 1.0; }

  double to_natural(Quantity q, double value) const { return value * factor(q); }
  double from_natural(Quantity q, double value) const { return value / factor(q); }

 private:
  // natural = user * factor(q)
  double factor(Quantity q) const;

  double hbar_ = 1.0;
  double c_ = 1.0;
};

// Thermal photon number n_T[omega] = 1 / (exp(omega/T) - 1).
double bose_occupation(double omega, Temperature temp);

// d n_T / dT at fixed omega.
double bose_occupation_temp_derivative(double omega, Temperature temp);

// coth(omega / 2T); sign(omega) at T = 0. Undefined at omega = 0.
double smoothed_sign(double omega, Temperature temp);

// Occupation as a function of the reduced frequency x = omega / T.
double bose_occupation_reduced(double x);

// x e^x / (e^x - 1)^2, so that d n_T / dT = reduced_temp_derivative(x) / T.
double bose_temp_derivative_reduced(double x);

}  // namespace mirrordrag
