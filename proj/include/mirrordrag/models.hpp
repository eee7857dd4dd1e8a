#pragma once

// Mirror scattering models and the kernels built from their amplitudes.
//
// A model supplies the reflection amplitude r[omega] and the transmission
// amplitude s[omega] of a lossless mirror in 1+1 dimensions. The derived
// quantities are the reflection probability R = |r|^2, the total phase Delta
// of the determinant s^2 - r^2 = exp(i Delta) and the scattering delay
// tau = Delta' / 2. All frequencies are in natural units.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mirrordrag/physics.hpp"

namespace mirrordrag {

struct Amplitudes {
  Complex r;
  Complex s;
};

class MirrorModel {
 public:
  virtual ~MirrorModel() = default;

  virtual std::string_view kind() const = 0;
  virtual Amplitudes amplitudes(double omega) const = 0;

  // Exact d/domega and d^2/domega^2 of (r, s), when the model knows them.
  virtual std::optional<Amplitudes> derivatives(double /*omega*/) const { return std::nullopt; }
  virtual std::optional<Amplitudes> second_derivatives(double /*omega*/) const {
    return std::nullopt;
  }

  // R0 = lim R[omega] and tau0 = lim tau[omega] as omega -> 0.
  virtual double low_frequency_reflection() const;
  virtual double low_frequency_delay() const;

  // Reflection cutoff omega_C; empty for mirrors without one.
  virtual std::optional<double> cutoff_frequency() const = 0;
  virtual bool transparent_at_high_frequency() const = 0;
  virtual bool perfect_reflector() const { return false; }

  // Frequency scale used for finite-difference steps and quadrature breakpoints.
  double reference_frequency() const { return cutoff_frequency().value_or(1.0); }
};

// r = -1, s = 0 at every frequency.
class PerfectMirror final : public MirrorModel {
 public:
  std::string_view kind() const override { return "perfect"; }
  Amplitudes amplitudes(double) const override { return {Complex(-1.0, 0.0), Complex(0.0, 0.0)}; }
  std::optional<Amplitudes> derivatives(double) const override { return Amplitudes{}; }
  std::optional<Amplitudes> second_derivatives(double) const override { return Amplitudes{}; }
  double low_frequency_reflection() const override { return 1.0; }
  double low_frequency_delay() const override { return 0.0; }
  std::optional<double> cutoff_frequency() const override { return std::nullopt; }
  bool transparent_at_high_frequency() const override { return false; }
  bool perfect_reflector() const override { return true; }
};

// r = -1 / (1 - i omega tau0), s = -i omega tau0 / (1 - i omega tau0).
class LorentzianMirror final : public MirrorModel {
 public:
  explicit LorentzianMirror(double tau0);

  double tau0() const { return tau0_; }

  std::string_view kind() const override { return "lorentzian"; }
  Amplitudes amplitudes(double omega) const override;
  std::optional<Amplitudes> derivatives(double omega) const override;
  std::optional<Amplitudes> second_derivatives(double omega) const override;
  double low_frequency_reflection() const override { return 1.0; }
  double low_frequency_delay() const override { return tau0_; }
  std::optional<double> cutoff_frequency() const override { return 1.0 / tau0_; }
  bool transparent_at_high_frequency() const override { return true; }

 private:
  double tau0_;
};

// r and s as ratios of real polynomials in z = i omega. Coefficients are in
// ascending powers of z. Real coefficients make the reality condition exact;
// unitarity has to be checked with validate_model.
class RationalMirror final : public MirrorModel {
 public:
  struct Coefficients {
    std::vector<double> r_num;
    std::vector<double> r_den;
    std::vector<double> s_num;
    std::vector<double> s_den;
  };

  explicit RationalMirror(Coefficients coefficients);

  // The lorentzian model written as a rational model.
  static Coefficients lorentzian(double tau0);

  const Coefficients& coefficients() const { return coeffs_; }

  std::string_view kind() const override { return "rational"; }
  Amplitudes amplitudes(double omega) const override;
  std::optional<Amplitudes> derivatives(double omega) const override;
  std::optional<Amplitudes> second_derivatives(double omega) const override;
  std::optional<double> cutoff_frequency() const override { return cutoff_; }
  bool transparent_at_high_frequency() const override { return transparent_; }

 private:
  Coefficients coeffs_;
  bool transparent_ = false;
  std::optional<double> cutoff_;
};

// Amplitudes supplied by a user function; derivatives are taken numerically.
class CallbackMirror final : public MirrorModel {
 public:
  using Function = std::function<Amplitudes(double)>;

  CallbackMirror(Function fn, std::optional<double> cutoff, bool transparent);

  std::string_view kind() const override { return "callback"; }
  Amplitudes amplitudes(double omega) const override { return fn_(omega); }
  std::optional<double> cutoff_frequency() const override { return cutoff_; }
  bool transparent_at_high_frequency() const override { return transparent_; }

 private:
  Function fn_;
  std::optional<double> cutoff_;
  bool transparent_;
};

// d(r, s)/domega, exact when available, otherwise by central differences.
Amplitudes amplitude_derivatives(const MirrorModel& model, double omega);

double reflection_probability(const MirrorModel& model, double omega);
double reflection_probability_derivative(const MirrorModel& model, double omega);

// exp(i Delta[omega]) = s^2 - r^2.
Complex scattering_determinant(const MirrorModel& model, double omega);

// tau[omega] = Delta'[omega] / 2. Throws derivative_unavailable when the
// phase cannot be differentiated.
double scattering_delay(const MirrorModel& model, double omega);
double scattering_delay_derivative(const MirrorModel& model, double omega);

// Delta along an ordered frequency sweep, unwrapped to the nearest branch.
std::vector<double> unwrapped_phase(const MirrorModel& model, std::span<const double> grid);

// alpha[w1, w2] = 1 + r[w1] r[w2] - s[w1] s[w2].
Complex alpha_kernel(const MirrorModel& model, double omega1, double omega2);

// a[omega] = 2 R[omega]; the complex form is 1 + r[w] r[-w] - s[w] s[-w].
double a_function(const MirrorModel& model, double omega);
Complex a_function_complex_form(const MirrorModel& model, double omega);
double a_function_derivative(const MirrorModel& model, double omega);

// b[omega] = 2 (1 - 2 R[omega]) tau[omega]; the complex form is
// i (r'[w] r[-w] + r[w] r'[-w]) - i (s'[w] s[-w] + s[w] s'[-w]).
double b_function(const MirrorModel& model, double omega);
Complex b_function_complex_form(const MirrorModel& model, double omega);
double b_function_derivative(const MirrorModel& model, double omega);

struct Violation {
  double value = 0.0;
  double worst_omega = 0.0;
};

struct ValidationReport {
  Violation unitarity_norm;   // | |s|^2 + |r|^2 - 1 |
  Violation unitarity_cross;  // | s r* + r s* |
  Violation reality;          // max(|r[-w] - r[w]*|, |s[-w] - s[w]*|)
  Violation transparency;     // |r| far above the cutoff
  bool transparency_checked = false;
  double tolerance = 0.0;
  double transparency_tolerance = 1e-3;

  bool passed() const;
  std::string describe() const;
};

// n log-spaced positive frequencies in [1e-3, 1e3] * reference frequency.
// The reality check mirrors each point to -omega itself.
std::vector<double> default_validation_grid(const MirrorModel& model, std::size_t n = 1000);

ValidationReport validate_model(const MirrorModel& model, std::span<const double> grid,
                                double tolerance = 1e-10);

// Throws Error(validation_failed) listing every violated relation.
void require_valid(const MirrorModel& model, std::span<const double> grid,
                   double tolerance = 1e-10);

}  // namespace mirrordrag
