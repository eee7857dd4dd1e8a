#include "mirrordrag/mirrordrag.h"

#include <map>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "mirrordrag/coefficients.hpp"
#include "mirrordrag/config.hpp"
#include "mirrordrag/error.hpp"
#include "mirrordrag/models.hpp"
#include "mirrordrag/susceptibility.hpp"
#include "parallel.hpp"

struct mdr_model {
  std::unique_ptr<mirrordrag::MirrorModel> impl;
};

struct mdr_config {
  mirrordrag::Config impl;
  // Backing storage for strings handed out through const char**.
  mutable std::map<std::string, std::string> strings;
  mutable std::map<std::string, std::string> paths;
  mutable std::vector<std::string> keys;
};

namespace {

using namespace mirrordrag;

thread_local std::string last_error;

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

mdr_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return MDR_DOMAIN;
    case ErrorCode::derivative_unavailable: return MDR_DERIVATIVE_UNAVAILABLE;
    case ErrorCode::validation_failed: return MDR_VALIDATION_FAILED;
    case ErrorCode::tolerance_not_reached: return MDR_TOLERANCE_NOT_REACHED;
    case ErrorCode::growth_bound_exceeded: return MDR_GROWTH_BOUND_EXCEEDED;
    case ErrorCode::extrapolation_unstable: return MDR_EXTRAPOLATION_UNSTABLE;
    case ErrorCode::grid_too_coarse: return MDR_GRID_TOO_COARSE;
    case ErrorCode::divergent_bandwidth: return MDR_DIVERGENT_BANDWIDTH;
    case ErrorCode::config: return MDR_CONFIG;
    case ErrorCode::io: return MDR_IO;
  }
  return MDR_INTERNAL;
}

template <typename F>
mdr_status guarded(F&& body) noexcept {
  try {
    body();
    return MDR_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const InvalidArgument& e) {
    last_error = e.what();
    return MDR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MDR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MDR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return MDR_INTERNAL;
  }
}

template <typename... Ptrs>
void require(const char* what, const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw InvalidArgument(std::string(what) + ": null argument");
}

const MirrorModel& model_of(const mdr_model* m) {
  if (m == nullptr || !m->impl) throw InvalidArgument("null model handle");
  return *m->impl;
}

QuadratureConfig quad_of(const mdr_quad_config* cfg) {
  QuadratureConfig q;
  if (cfg != nullptr) {
    q.rel_tol = cfg->rel_tol;
    q.abs_tol = cfg->abs_tol;
    q.max_subdivisions = cfg->max_subdivisions;
  }
  q.check();
  return q;
}

Quantity quantity_of(mdr_quantity q) {
  switch (q) {
    case MDR_ENERGY: return Quantity::energy;
    case MDR_FREQUENCY: return Quantity::frequency;
    case MDR_TIME: return Quantity::time;
    case MDR_MASS: return Quantity::mass;
    case MDR_VISCOSITY: return Quantity::viscosity;
    case MDR_POWER: return Quantity::power;
    case MDR_SUSCEPTIBILITY: return Quantity::susceptibility;
    case MDR_SPECTRUM: return Quantity::spectrum;
  }
  throw InvalidArgument("unknown quantity");
}

UnitSystem units_of(const mdr_units* u) {
  require("units", u);
  return UnitSystem(u->hbar, u->c);
}

mdr_complex to_c(Complex z) { return {z.real(), z.imag()}; }

mdr_status wrap_model(std::unique_ptr<MirrorModel> impl, mdr_model** out) {
  return guarded([&] { *out = new mdr_model{std::move(impl)}; });
}

std::vector<double> copy_list(const double* p, std::size_t n) {
  if (n > 0 && p == nullptr) throw InvalidArgument("null coefficient list");
  return std::vector<double>(p, p + n);
}

mdr_chi_value to_c(const SusceptibilityValue& v) {
  return {v.omega, to_c(v.chi_vacuum), to_c(v.chi_thermal), to_c(v.chi_total), v.error_estimate};
}

mdr_coefficients to_c(const CoefficientReport& r) {
  return {r.temp,
          r.lambda_spectral,
          r.lambda_entropic,
          r.mu_spectral,
          r.mu_entropic,
          r.energy_flux,
          r.stocked_quantity,
          r.route_discrepancy_lambda,
          r.route_discrepancy_mu,
          r.err_lambda,
          r.err_mu,
          r.err_energy_flux,
          r.err_stocked_quantity,
          r.converged ? 1 : 0};
}

CoefficientHooks hooks_of(unsigned flags) {
  CoefficientHooks h;
  h.flip_b_in_spectral_route = (flags & MDR_HOOK_FLIP_B_SPECTRAL) != 0;
  return h;
}

const Config& config_of(const mdr_config* c) {
  if (c == nullptr) throw InvalidArgument("null config handle");
  return c->impl;
}

}  // namespace

extern "C" {

const char* mdr_status_string(mdr_status status) {
  switch (status) {
    case MDR_OK: return "ok";
    case MDR_INVALID_ARGUMENT: return "invalid argument";
    case MDR_DOMAIN: return "domain error";
    case MDR_DERIVATIVE_UNAVAILABLE: return "derivative unavailable";
    case MDR_VALIDATION_FAILED: return "model validation failed";
    case MDR_TOLERANCE_NOT_REACHED: return "tolerance not reached";
    case MDR_GROWTH_BOUND_EXCEEDED: return "integrand growth bound exceeded";
    case MDR_EXTRAPOLATION_UNSTABLE: return "extrapolation unstable";
    case MDR_GRID_TOO_COARSE: return "grid too coarse";
    case MDR_DIVERGENT_BANDWIDTH: return "divergent bandwidth";
    case MDR_CONFIG: return "configuration error";
    case MDR_IO: return "i/o error";
    case MDR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mdr_last_error(void) { return last_error.c_str(); }

void mdr_quad_config_default(mdr_quad_config* cfg) {
  if (cfg == nullptr) return;
  const QuadratureConfig q;
  *cfg = {q.rel_tol, q.abs_tol, q.max_subdivisions};
}

mdr_status mdr_units_to_natural(const mdr_units* units, mdr_quantity q, double value,
                                double* out) {
  return guarded([&] {
    require("mdr_units_to_natural", out);
    *out = units_of(units).to_natural(quantity_of(q), value);
  });
}

mdr_status mdr_units_from_natural(const mdr_units* units, mdr_quantity q, double value,
                                  double* out) {
  return guarded([&] {
    require("mdr_units_from_natural", out);
    *out = units_of(units).from_natural(quantity_of(q), value);
  });
}

mdr_status mdr_model_create_perfect(mdr_model** out) {
  if (out == nullptr) return MDR_INVALID_ARGUMENT;
  return wrap_model(std::make_unique<PerfectMirror>(), out);
}

mdr_status mdr_model_create_lorentzian(double tau0, mdr_model** out) {
  if (out == nullptr) return MDR_INVALID_ARGUMENT;
  return guarded([&] { *out = new mdr_model{std::make_unique<LorentzianMirror>(tau0)}; });
}

mdr_status mdr_model_create_rational(const double* r_num, size_t r_num_len, const double* r_den,
                                     size_t r_den_len, const double* s_num, size_t s_num_len,
                                     const double* s_den, size_t s_den_len, mdr_model** out) {
  return guarded([&] {
    require("mdr_model_create_rational", out);
    RationalMirror::Coefficients c{copy_list(r_num, r_num_len), copy_list(r_den, r_den_len),
                                   copy_list(s_num, s_num_len), copy_list(s_den, s_den_len)};
    *out = new mdr_model{std::make_unique<RationalMirror>(std::move(c))};
  });
}

mdr_status mdr_model_create_callback(mdr_amplitude_fn fn, void* user_data, double cutoff,
                                     int transparent, mdr_model** out) {
  return guarded([&] {
    if (fn == nullptr || out == nullptr) throw InvalidArgument("mdr_model_create_callback: null argument");
    auto call = [fn, user_data](double omega) {
      mdr_complex r{0.0, 0.0};
      mdr_complex s{0.0, 0.0};
      fn(omega, user_data, &r, &s);
      return Amplitudes{Complex(r.re, r.im), Complex(s.re, s.im)};
    };
    std::optional<double> c;
    if (cutoff > 0.0) c = cutoff;
    *out = new mdr_model{std::make_unique<CallbackMirror>(call, c, transparent != 0)};
  });
}

void mdr_model_destroy(mdr_model* model) { delete model; }

mdr_status mdr_model_get_info(const mdr_model* model, mdr_model_info* info) {
  return guarded([&] {
    require("mdr_model_get_info", info);
    const MirrorModel& m = model_of(model);
    const auto cutoff = m.cutoff_frequency();
    info->kind = m.kind().data();
    info->has_cutoff = cutoff ? 1 : 0;
    info->cutoff = cutoff.value_or(0.0);
    info->reference_frequency = m.reference_frequency();
    info->transparent = m.transparent_at_high_frequency() ? 1 : 0;
    info->perfect = m.perfect_reflector() ? 1 : 0;
    info->reflection_r0 = m.low_frequency_reflection();
    info->delay_tau0 = m.low_frequency_delay();
  });
}

mdr_status mdr_model_amplitudes(const mdr_model* model, double omega, mdr_complex* r,
                                mdr_complex* s) {
  return guarded([&] {
    require("mdr_model_amplitudes", r, s);
    const Amplitudes a = model_of(model).amplitudes(omega);
    *r = to_c(a.r);
    *s = to_c(a.s);
  });
}

mdr_status mdr_reflection_probability(const mdr_model* model, double omega, double* out) {
  return guarded([&] {
    require("mdr_reflection_probability", out);
    *out = reflection_probability(model_of(model), omega);
  });
}

mdr_status mdr_scattering_delay(const mdr_model* model, double omega, double* out) {
  return guarded([&] {
    require("mdr_scattering_delay", out);
    *out = scattering_delay(model_of(model), omega);
  });
}

mdr_status mdr_alpha_kernel(const mdr_model* model, double omega1, double omega2,
                            mdr_complex* out) {
  return guarded([&] {
    require("mdr_alpha_kernel", out);
    *out = to_c(alpha_kernel(model_of(model), omega1, omega2));
  });
}

mdr_status mdr_a_function(const mdr_model* model, double omega, double* out) {
  return guarded([&] {
    require("mdr_a_function", out);
    *out = a_function(model_of(model), omega);
  });
}

mdr_status mdr_a_function_complex_form(const mdr_model* model, double omega, mdr_complex* out) {
  return guarded([&] {
    require("mdr_a_function_complex_form", out);
    *out = to_c(a_function_complex_form(model_of(model), omega));
  });
}

mdr_status mdr_b_function(const mdr_model* model, double omega, double* out) {
  return guarded([&] {
    require("mdr_b_function", out);
    *out = b_function(model_of(model), omega);
  });
}

mdr_status mdr_b_function_complex_form(const mdr_model* model, double omega, mdr_complex* out) {
  return guarded([&] {
    require("mdr_b_function_complex_form", out);
    *out = to_c(b_function_complex_form(model_of(model), omega));
  });
}

mdr_status mdr_validate_model(const mdr_model* model, const double* grid, size_t grid_len,
                              double tolerance, mdr_validation_report* report) {
  return guarded([&] {
    require("mdr_validate_model", report);
    const MirrorModel& m = model_of(model);
    if (!(tolerance > 0.0)) throw InvalidArgument("mdr_validate_model: tolerance must be > 0");
    std::vector<double> points;
    if (grid == nullptr) {
      points = default_validation_grid(m);
    } else {
      points.assign(grid, grid + grid_len);
    }
    const ValidationReport v = validate_model(m, points, tolerance);
    const auto conv = [](const Violation& x) { return mdr_violation{x.value, x.worst_omega}; };
    report->unitarity_norm = conv(v.unitarity_norm);
    report->unitarity_cross = conv(v.unitarity_cross);
    report->reality = conv(v.reality);
    report->transparency = conv(v.transparency);
    report->transparency_checked = v.transparency_checked ? 1 : 0;
    report->tolerance = v.tolerance;
    report->transparency_tolerance = v.transparency_tolerance;
    report->passed = v.passed() ? 1 : 0;
  });
}

mdr_status mdr_chi(const mdr_model* model, double omega, double temperature,
                   const mdr_quad_config* cfg, mdr_chi_value* out) {
  return guarded([&] {
    require("mdr_chi", out);
    *out = to_c(chi_total(model_of(model), omega, Temperature{temperature}, quad_of(cfg)));
  });
}

mdr_status mdr_chi_grid(const mdr_model* model, const double* omegas, size_t count,
                        double temperature, const mdr_quad_config* cfg, mdr_chi_value* out) {
  return guarded([&] {
    if (count == 0) return;
    require("mdr_chi_grid", omegas, out);
    const MirrorModel& m = model_of(model);
    const QuadratureConfig q = quad_of(cfg);
    detail::parallel_for(count, [&](std::size_t i) {
      out[i] = to_c(chi_total(m, omegas[i], Temperature{temperature}, q));
    });
  });
}

mdr_status mdr_chi_zero_point(const mdr_model* model, double omega, const mdr_quad_config* cfg,
                              mdr_complex* out, double* error_estimate) {
  return guarded([&] {
    require("mdr_chi_zero_point", out);
    const auto r = chi_zero_point_correction(model_of(model), omega, quad_of(cfg));
    *out = to_c(r.value);
    if (error_estimate != nullptr) *error_estimate = r.error_estimate;
  });
}

mdr_status mdr_correlation_spectrum(const mdr_model* model, double omega, double temperature,
                                    const mdr_quad_config* cfg, double* out) {
  return guarded([&] {
    require("mdr_correlation_spectrum", out);
    *out = correlation_spectrum(model_of(model), omega, Temperature{temperature}, quad_of(cfg))
               .c_spectrum;
  });
}

mdr_status mdr_correlation_zero_frequency(const mdr_model* model, double temperature,
                                          const mdr_quad_config* cfg, double* out) {
  return guarded([&] {
    require("mdr_correlation_zero_frequency", out);
    *out = correlation_zero_frequency(model_of(model), Temperature{temperature}, quad_of(cfg));
  });
}

mdr_status mdr_low_frequency_expansion(const mdr_model* model, double temperature,
                                       const mdr_quad_config* cfg, double* lambda, double* mu) {
  return guarded([&] {
    require("mdr_low_frequency_expansion", lambda, mu);
    const auto e = low_frequency_expansion(model_of(model), Temperature{temperature}, quad_of(cfg));
    *lambda = e.lambda;
    *mu = e.mu;
  });
}

mdr_status mdr_vacuum_cubic_coefficient(const mdr_model* model, const mdr_quad_config* cfg,
                                        double* out) {
  return guarded([&] {
    require("mdr_vacuum_cubic_coefficient", out);
    *out = vacuum_cubic_coefficient(model_of(model), quad_of(cfg));
  });
}

mdr_status mdr_kramers_kronig_check(const mdr_model* model, double temperature, double omega_lo,
                                    double omega_hi, size_t count, const mdr_quad_config* cfg,
                                    mdr_kk_report* report) {
  return guarded([&] {
    require("mdr_kramers_kronig_check", report);
    if (!(omega_hi > omega_lo)) throw Error(ErrorCode::domain, "KK window must be ordered");
    if (count < 2) throw Error(ErrorCode::grid_too_coarse, "KK window needs at least two points");
    const auto r = kramers_kronig_check(model_of(model), Temperature{temperature},
                                        UniformGrid::linspace(omega_lo, omega_hi, count),
                                        quad_of(cfg));
    *report = {r.max_discrepancy, r.worst_omega,       r.odd_residual,    r.even_residual,
               r.symmetric_grid ? 1 : 0,   r.window_warning ? 1 : 0, r.interior_points, r.peak,
               r.lambda,        r.mu};
  });
}

mdr_status mdr_coefficients_compute(const mdr_model* model, double temperature,
                                    const mdr_quad_config* cfg, unsigned hooks,
                                    mdr_coefficients* out) {
  return guarded([&] {
    require("mdr_coefficients_compute", out);
    *out = to_c(compute_coefficients(model_of(model), Temperature{temperature}, quad_of(cfg),
                                     hooks_of(hooks)));
  });
}

mdr_status mdr_temperature_sweep(const mdr_model* model, const double* temperatures,
                                 size_t count, const mdr_quad_config* cfg, unsigned hooks,
                                 mdr_coefficients* out) {
  return guarded([&] {
    if (count == 0) return;
    require("mdr_temperature_sweep", temperatures, out);
    const auto reports = temperature_sweep(model_of(model),
                                           std::span<const double>(temperatures, count),
                                           quad_of(cfg), hooks_of(hooks));
    for (std::size_t i = 0; i < count; ++i) out[i] = to_c(reports[i]);
  });
}

mdr_status mdr_asymptotics_compute(const mdr_model* model, double temperature,
                                   const mdr_quad_config* cfg, mdr_asymptotics* out) {
  return guarded([&] {
    require("mdr_asymptotics_compute", out);
    const auto a = asymptotics(model_of(model), Temperature{temperature}, quad_of(cfg));
    *out = {a.omega_c_effective, a.delta_s,        a.reflection_r0,      a.delay_tau0,
            a.temp,              a.lambda_high_t,  a.lambda_low_t,       a.mu_high_t,
            a.mu_low_t,          a.energy_flux_high_t, a.energy_flux_low_t};
  });
}

mdr_status mdr_einstein_check(const mdr_model* model, double temperature,
                              const mdr_quad_config* cfg, double lambda_scale,
                              mdr_einstein_report* out) {
  return guarded([&] {
    require("mdr_einstein_check", out);
    const auto e =
        einstein_check(model_of(model), Temperature{temperature}, quad_of(cfg), lambda_scale);
    *out = {e.half_c_zero, e.t_lambda, e.discrepancy};
  });
}

mdr_status mdr_mass_bound_check(const mdr_model* model, double temperature, double mirror_mass,
                                const mdr_quad_config* cfg, mdr_mass_bound_report* out) {
  return guarded([&] {
    require("mdr_mass_bound_check", out);
    const auto r =
        mass_bound_check(model_of(model), Temperature{temperature}, mirror_mass, quad_of(cfg));
    *out = {r.cutoff_checked ? 1 : 0, r.cutoff_ratio, r.cutoff_ok ? 1 : 0, r.mass_ratio,
            r.mass_ok ? 1 : 0,        r.regime_warning ? 1 : 0, r.mu};
  });
}

mdr_status mdr_quasistatic_force(const mdr_coefficients* coefficients, const double* t,
                                 const double* q, size_t count, double validity_rate,
                                 double* force, int* quasistatic_warning,
                                 double* characteristic_rate) {
  return guarded([&] {
    require("mdr_quasistatic_force", coefficients);
    if (count > 0) require("mdr_quasistatic_force", t, q);
    CoefficientReport report;
    report.lambda_spectral = coefficients->lambda_spectral;
    report.mu_spectral = coefficients->mu_spectral;
    std::vector<TrajectoryPoint> traj(count);
    for (std::size_t i = 0; i < count; ++i) traj[i] = {t[i], q[i]};
    const ForceSeries series = quasistatic_force(report, traj, validity_rate);
    require("mdr_quasistatic_force", force);
    for (std::size_t i = 0; i < series.points.size(); ++i) force[i] = series.points[i].force;
    if (quasistatic_warning != nullptr) *quasistatic_warning = series.quasistatic_warning ? 1 : 0;
    if (characteristic_rate != nullptr) *characteristic_rate = series.characteristic_rate;
  });
}

mdr_status mdr_config_load_file(const char* path, mdr_config** out) {
  return guarded([&] {
    require("mdr_config_load_file", path, out);
    *out = new mdr_config{Config::load_file(path), {}, {}, {}};
  });
}

mdr_status mdr_config_parse(const char* text, mdr_config** out) {
  return guarded([&] {
    require("mdr_config_parse", text, out);
    *out = new mdr_config{Config::parse(text), {}, {}, {}};
  });
}

void mdr_config_destroy(mdr_config* config) { delete config; }

mdr_status mdr_config_set(mdr_config* config, const char* key, const char* value) {
  return guarded([&] {
    require("mdr_config_set", config, key, value);
    config->impl.set(key, value);
    config->strings.clear();
    config->paths.clear();
    config->keys.clear();
  });
}

int mdr_config_has(const mdr_config* config, const char* key) {
  return config != nullptr && key != nullptr && config->impl.has(key) ? 1 : 0;
}

size_t mdr_config_key_count(const mdr_config* config) {
  return config == nullptr ? 0 : config->impl.keys().size();
}

mdr_status mdr_config_key_at(const mdr_config* config, size_t index, const char** key) {
  return guarded([&] {
    require("mdr_config_key_at", key);
    const Config& c = config_of(config);
    if (config->keys.empty()) config->keys = c.keys();
    if (index >= config->keys.size()) throw InvalidArgument("mdr_config_key_at: index out of range");
    *key = config->keys[index].c_str();
  });
}

mdr_status mdr_config_get_string(const mdr_config* config, const char* key, const char** value) {
  return guarded([&] {
    require("mdr_config_get_string", key, value);
    std::string v = config_of(config).get_string(key);
    auto& slot = config->strings[key];
    slot = std::move(v);
    *value = slot.c_str();
  });
}

mdr_status mdr_config_get_double(const mdr_config* config, const char* key, double* value) {
  return guarded([&] {
    require("mdr_config_get_double", key, value);
    *value = config_of(config).get_double(key);
  });
}

mdr_status mdr_config_get_count(const mdr_config* config, const char* key, size_t* value) {
  return guarded([&] {
    require("mdr_config_get_count", key, value);
    *value = config_of(config).get_count(key);
  });
}

mdr_status mdr_config_get_list(const mdr_config* config, const char* key, double* values,
                               size_t capacity, size_t* length) {
  return guarded([&] {
    require("mdr_config_get_list", key, length);
    const auto list = config_of(config).get_list(key);
    *length = list.size();
    if (capacity > 0) require("mdr_config_get_list", values);
    for (std::size_t i = 0; i < list.size() && i < capacity; ++i) values[i] = list[i];
  });
}

mdr_status mdr_config_get_path(const mdr_config* config, const char* key, const char** path) {
  return guarded([&] {
    require("mdr_config_get_path", key, path);
    auto p = config_of(config).get_path(key).string();
    auto& slot = config->paths[key];
    slot = std::move(p);
    *path = slot.c_str();
  });
}

mdr_status mdr_config_units(const mdr_config* config, mdr_units* units) {
  return guarded([&] {
    require("mdr_config_units", units);
    const UnitSystem u = units_from_config(config_of(config));
    *units = {u.hbar(), u.c()};
  });
}

mdr_status mdr_config_quadrature(const mdr_config* config, mdr_quad_config* cfg) {
  return guarded([&] {
    require("mdr_config_quadrature", cfg);
    const QuadratureConfig q = quadrature_from_config(config_of(config));
    *cfg = {q.rel_tol, q.abs_tol, q.max_subdivisions};
  });
}

mdr_status mdr_config_create_model(const mdr_config* config, mdr_model** out) {
  return guarded([&] {
    require("mdr_config_create_model", out);
    const Config& c = config_of(config);
    *out = new mdr_model{model_from_config(c, units_from_config(c))};
  });
}

}  // extern "C"
