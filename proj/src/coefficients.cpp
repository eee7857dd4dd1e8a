#include "mirrordrag/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mirrordrag/error.hpp"
#include "mirrordrag/susceptibility.hpp"
#include "parallel.hpp"

namespace mirrordrag {

namespace {

void require_positive(Temperature temp, const char* what) {
  if (!(temp.value > 0.0) || !std::isfinite(temp.value)) {
    throw Error(ErrorCode::domain, std::string(what) + ": requires T > 0");
  }
}

ThermalOptions options_for(const MirrorModel& model, ThermalWeight weight) {
  ThermalOptions opts;
  opts.weight = weight;
  const double ref = model.reference_frequency();
  opts.breakpoints = {0.1 * ref, ref, 10.0 * ref};
  return opts;
}

QuadratureResult<double> thermal(const MirrorModel& model, Temperature temp,
                                 const QuadratureConfig& cfg, ThermalWeight weight,
                                 const RealIntegrand& f, double prefactor) {
  auto r = integrate_thermal(f, temp, cfg, options_for(model, weight));
  r.value *= prefactor;
  r.error_estimate *= std::abs(prefactor);
  return r;
}

double rms(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

QuadratureResult<double> energy_flux_A(const MirrorModel& model, Temperature temp,
                                       const QuadratureConfig& cfg) {
  require_positive(temp, "energy_flux_A");
  return thermal(model, temp, cfg, ThermalWeight::occupation,
                 [&](double w) { return w * reflection_probability(model, w); }, 1.0 / pi);
}

QuadratureResult<double> stocked_quantity_B(const MirrorModel& model, Temperature temp,
                                            const QuadratureConfig& cfg) {
  require_positive(temp, "stocked_quantity_B");
  return thermal(model, temp, cfg, ThermalWeight::occupation,
                 [&](double w) { return w * b_function(model, w); }, 0.5 / pi);
}

QuadratureResult<double> lambda_spectral(const MirrorModel& model, Temperature temp,
                                         const QuadratureConfig& cfg) {
  require_positive(temp, "lambda_spectral");
  // d/dw (w^2 a) = w^2 a' + 2 w a
  return thermal(model, temp, cfg, ThermalWeight::occupation,
                 [&](double w) {
                   return w * w * a_function_derivative(model, w) + 2.0 * w * a_function(model, w);
                 },
                 1.0 / pi);
}

QuadratureResult<double> lambda_entropic(const MirrorModel& model, Temperature temp,
                                         const QuadratureConfig& cfg) {
  require_positive(temp, "lambda_entropic");
  return thermal(model, temp, cfg, ThermalWeight::occupation_temp_derivative,
                 [&](double w) { return w * a_function(model, w); }, temp.value / pi);
}

QuadratureResult<double> mu_spectral(const MirrorModel& model, Temperature temp,
                                     const QuadratureConfig& cfg, const CoefficientHooks& hooks) {
  require_positive(temp, "mu_spectral");
  const double sign = hooks.flip_b_in_spectral_route ? -1.0 : 1.0;
  return thermal(model, temp, cfg, ThermalWeight::occupation,
                 [&](double w) {
                   return w * w * b_function_derivative(model, w) + 2.0 * w * b_function(model, w);
                 },
                 sign * 0.5 / pi);
}

QuadratureResult<double> mu_entropic(const MirrorModel& model, Temperature temp,
                                     const QuadratureConfig& cfg) {
  require_positive(temp, "mu_entropic");
  return thermal(model, temp, cfg, ThermalWeight::occupation_temp_derivative,
                 [&](double w) { return w * b_function(model, w); }, 0.5 * temp.value / pi);
}

double relative_discrepancy(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  if (scale == 0.0) return 0.0;
  return std::abs(x - y) / scale;
}

CoefficientReport compute_coefficients(const MirrorModel& model, Temperature temp,
                                       const QuadratureConfig& cfg,
                                       const CoefficientHooks& hooks) {
  const auto ls = lambda_spectral(model, temp, cfg);
  const auto le = lambda_entropic(model, temp, cfg);
  const auto ms = mu_spectral(model, temp, cfg, hooks);
  const auto me = mu_entropic(model, temp, cfg);
  const auto a = energy_flux_A(model, temp, cfg);
  const auto b = stocked_quantity_B(model, temp, cfg);

  CoefficientReport r;
  r.temp = temp.value;
  r.lambda_spectral = ls.value;
  r.lambda_entropic = le.value;
  r.mu_spectral = ms.value;
  r.mu_entropic = me.value;
  r.energy_flux = a.value;
  r.stocked_quantity = b.value;
  r.route_discrepancy_lambda = relative_discrepancy(ls.value, le.value);
  r.route_discrepancy_mu = relative_discrepancy(ms.value, me.value);
  r.err_lambda = std::max(ls.error_estimate, le.error_estimate);
  r.err_mu = std::max(ms.error_estimate, me.error_estimate);
  r.err_energy_flux = a.error_estimate;
  r.err_stocked_quantity = b.error_estimate;
  r.converged = ls.converged && le.converged && ms.converged && me.converged && a.converged &&
                b.converged;
  return r;
}

std::vector<CoefficientReport> temperature_sweep(const MirrorModel& model,
                                                 std::span<const double> temps,
                                                 const QuadratureConfig& cfg,
                                                 const CoefficientHooks& hooks) {
  std::vector<CoefficientReport> out(temps.size());
  detail::parallel_for(temps.size(), [&](std::size_t i) {
    out[i] = compute_coefficients(model, Temperature{temps[i]}, cfg, hooks);
  });
  return out;
}

AsymptoticsReport asymptotics(const MirrorModel& model, Temperature temp,
                              const QuadratureConfig& cfg) {
  AsymptoticsReport r;
  r.temp = temp.value;
  r.reflection_r0 = model.low_frequency_reflection();
  r.delay_tau0 = model.low_frequency_delay();
  const double t = temp.value;
  if (model.perfect_reflector()) {
    r.omega_c_effective = std::numeric_limits<double>::infinity();
    r.delta_s = 0.0;
  } else if (!model.transparent_at_high_frequency()) {
    throw Error(ErrorCode::divergent_bandwidth,
                "asymptotics: reflection bandwidth integral diverges for a mirror that is not "
                "transparent at high frequency");
  } else {
    const double ref = model.reference_frequency();
    r.omega_c_effective =
        integrate_semi_infinite(
            RealIntegrand([&](double w) { return reflection_probability(model, w); }), ref, cfg)
            .value /
        (2.0 * pi);
    r.delta_s = integrate_semi_infinite(RealIntegrand([&](double w) {
                                          return (1.0 - 2.0 * reflection_probability(model, w)) *
                                                 2.0 * scattering_delay(model, w);
                                        }),
                                        ref, cfg)
                    .value /
                (2.0 * pi);
  }
  r.energy_flux_high_t = 2.0 * t * r.omega_c_effective;
  r.energy_flux_low_t = r.reflection_r0 * pi * t * t / 6.0;
  r.lambda_high_t = 2.0 * r.energy_flux_high_t;
  r.lambda_low_t = r.reflection_r0 * 2.0 * pi * t * t / 3.0;
  r.mu_high_t = t * r.delta_s;
  r.mu_low_t = (1.0 - 2.0 * r.reflection_r0) * r.delay_tau0 * pi * t * t / 3.0;
  return r;
}

ForceSeries quasistatic_force(const CoefficientReport& report,
                              std::span<const TrajectoryPoint> trajectory, double validity_rate) {
  const std::size_t n = trajectory.size();
  if (n < 3) {
    throw Error(ErrorCode::grid_too_coarse, "quasistatic_force: need at least 3 trajectory points");
  }
  const double dt = trajectory[1].t - trajectory[0].t;
  if (!(dt > 0.0)) throw Error(ErrorCode::domain, "quasistatic_force: time must increase");
  for (std::size_t i = 1; i < n; ++i) {
    const double step = trajectory[i].t - trajectory[i - 1].t;
    if (std::abs(step - dt) > 1e-9 * dt) {
      throw Error(ErrorCode::domain, "quasistatic_force: non-uniform time step");
    }
  }
  ForceSeries out;
  std::vector<double> velocity;
  std::vector<double> acceleration;
  out.points.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double qm = trajectory[i - 1].q;
    const double q0 = trajectory[i].q;
    const double qp = trajectory[i + 1].q;
    const double v = (qp - qm) / (2.0 * dt);
    const double acc = (qp - 2.0 * q0 + qm) / (dt * dt);
    velocity.push_back(v);
    acceleration.push_back(acc);
    out.points.push_back({trajectory[i].t, -(report.lambda_spectral * v + report.mu_spectral * acc)});
  }
  // Rate of change of the motion, from ratios of successive derivative sizes.
  double rate = 0.0;
  const double v_rms = rms(velocity);
  const double a_rms = rms(acceleration);
  if (v_rms > 0.0) rate = std::max(rate, a_rms / v_rms);
  if (a_rms > 0.0 && acceleration.size() >= 3) {
    std::vector<double> jerk;
    for (std::size_t i = 1; i + 1 < acceleration.size(); ++i) {
      jerk.push_back((acceleration[i + 1] - acceleration[i - 1]) / (2.0 * dt));
    }
    rate = std::max(rate, rms(jerk) / a_rms);
  }
  out.characteristic_rate = rate;
  out.quasistatic_warning = validity_rate > 0.0 && rate > 0.1 * validity_rate;
  return out;
}

EinsteinReport einstein_check(const MirrorModel& model, Temperature temp,
                              const QuadratureConfig& cfg, double lambda_scale) {
  require_positive(temp, "einstein_check");
  EinsteinReport r;
  r.half_c_zero = 0.5 * correlation_zero_frequency(model, temp, cfg);
  r.t_lambda = temp.value * lambda_spectral(model, temp, cfg).value * lambda_scale;
  r.discrepancy = std::abs(r.half_c_zero - r.t_lambda) / std::abs(r.t_lambda);
  return r;
}

MassBoundReport mass_bound_check(const MirrorModel& model, Temperature temp, double mirror_mass,
                                 const QuadratureConfig& cfg) {
  if (!(mirror_mass > 0.0)) throw Error(ErrorCode::domain, "mass_bound_check: mass must be > 0");
  MassBoundReport r;
  r.mu = mu_spectral(model, temp, cfg).value;
  r.mass_ratio = std::abs(r.mu) / mirror_mass;
  r.mass_ok = std::abs(r.mu) < mirror_mass;
  if (auto cutoff = model.cutoff_frequency()) {
    r.cutoff_checked = true;
    r.cutoff_ratio = *cutoff / mirror_mass;
    r.cutoff_ok = r.cutoff_ratio < 0.01;
    r.regime_warning = temp.value >= *cutoff;
  }
  return r;
}

}  // namespace mirrordrag
