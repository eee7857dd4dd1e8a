#include "mirrordrag/physics.hpp"

#include <cmath>
#include <string>

#include "mirrordrag/error.hpp"

namespace mirrordrag {

namespace {

// Above this reduced frequency the occupation is below 1e-300 and is flushed to zero.
constexpr double kOccupationCutoff = 700.0;
// Below this the Laurent expansion replaces 1/expm1(x).
constexpr double kClassicalThreshold = 1e-8;

void require_positive(double omega, Temperature temp, const char* what) {
  if (!(omega > 0.0) || !(temp.value > 0.0)) {
    throw Error(ErrorCode::domain,
                std::string(what) + ": requires omega > 0 and T > 0 (got omega = " +
                    std::to_string(omega) + ", T = " + std::to_string(temp.value) + ")");
  }
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::derivative_unavailable: return "derivative unavailable";
    case ErrorCode::validation_failed: return "model validation failed";
    case ErrorCode::tolerance_not_reached: return "tolerance not reached";
    case ErrorCode::growth_bound_exceeded: return "growth bound exceeded";
    case ErrorCode::extrapolation_unstable: return "extrapolation unstable";
    case ErrorCode::grid_too_coarse: return "grid too coarse";
    case ErrorCode::divergent_bandwidth: return "divergent bandwidth";
    case ErrorCode::config: return "configuration error";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

UnitSystem::UnitSystem(double hbar, double c) : hbar_(hbar), c_(c) {
  if (!(hbar > 0.0) || !(c > 0.0) || !std::isfinite(hbar) || !std::isfinite(c)) {
    throw Error(ErrorCode::domain, "unit system requires finite hbar > 0 and c > 0");
  }
}

double UnitSystem::factor(Quantity q) const {
  const double c2 = c_ * c_;
  switch (q) {
    case Quantity::energy: return 1.0;
    case Quantity::frequency: return hbar_;
    case Quantity::time: return 1.0 / hbar_;
    case Quantity::mass: return c2;
    case Quantity::viscosity: return hbar_ * c2;
    case Quantity::power: return hbar_;
    case Quantity::susceptibility: return hbar_ * hbar_ * c2;
    case Quantity::spectrum: return hbar_ * c2;
  }
  return 1.0;
}

double bose_occupation_reduced(double x) {
  if (x > kOccupationCutoff) return 0.0;
  if (x < kClassicalThreshold) return 1.0 / x - 0.5 + x / 12.0;
  return 1.0 / std::expm1(x);
}

double bose_temp_derivative_reduced(double x) {
  if (x > kOccupationCutoff) return 0.0;
  if (x < kClassicalThreshold) return 1.0 / x - x / 12.0;
  // e^x / (e^x - 1)^2 = 1 / (4 sinh^2(x/2))
  const double sh = std::sinh(0.5 * x);
  return x / (4.0 * sh * sh);
}

double bose_occupation(double omega, Temperature temp) {
  require_positive(omega, temp, "bose_occupation");
  return bose_occupation_reduced(omega / temp.value);
}

double bose_occupation_temp_derivative(double omega, Temperature temp) {
  require_positive(omega, temp, "bose_occupation_temp_derivative");
  return bose_temp_derivative_reduced(omega / temp.value) / temp.value;
}

double smoothed_sign(double omega, Temperature temp) {
  if (omega == 0.0 || !std::isfinite(omega)) {
    throw Error(ErrorCode::domain, "smoothed_sign: pole at omega = 0");
  }
  if (temp.value < 0.0) throw Error(ErrorCode::domain, "smoothed_sign: negative temperature");
  const double sign = omega > 0.0 ? 1.0 : -1.0;
  if (temp.is_zero()) return sign;
  return sign * (1.0 + 2.0 * bose_occupation_reduced(std::abs(omega) / temp.value));
}

}  // namespace mirrordrag
