#ifndef MIRRORDRAG_MIRRORDRAG_H
#define MIRRORDRAG_MIRRORDRAG_H

/*
 * C interface to the mirrordrag library: motional susceptibility, thermal
 * viscosity and mass correction of a partially transmitting mirror in a
 * thermal scalar field in 1+1 dimensions.
 *
 * All physical inputs and outputs are in natural units (hbar = c = k_B = 1)
 * unless stated otherwise; mdr_units_to_natural and mdr_units_from_natural
 * convert at the boundary.
 *
 * Every function returning mdr_status leaves a message for the calling thread
 * in mdr_last_error() when it fails. Handles are immutable after creation
 * (configs excepted) and may be shared between threads.
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(MIRRORDRAG_BUILDING)
#define MDR_API __declspec(dllexport)
#else
#define MDR_API __declspec(dllimport)
#endif
#else
#define MDR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mdr_status {
  MDR_OK = 0,
  MDR_INVALID_ARGUMENT = 1,
  MDR_DOMAIN = 2,
  MDR_DERIVATIVE_UNAVAILABLE = 3,
  MDR_VALIDATION_FAILED = 4,
  MDR_TOLERANCE_NOT_REACHED = 5,
  MDR_GROWTH_BOUND_EXCEEDED = 6,
  MDR_EXTRAPOLATION_UNSTABLE = 7,
  MDR_GRID_TOO_COARSE = 8,
  MDR_DIVERGENT_BANDWIDTH = 9,
  MDR_CONFIG = 10,
  MDR_IO = 11,
  MDR_INTERNAL = 99
} mdr_status;

MDR_API const char* mdr_status_string(mdr_status status);
/* Message of the last failure on this thread; empty after success is not guaranteed. */
MDR_API const char* mdr_last_error(void);

typedef struct mdr_model mdr_model;
typedef struct mdr_config mdr_config;

typedef struct mdr_complex {
  double re;
  double im;
} mdr_complex;

typedef struct mdr_quad_config {
  double rel_tol;
  double abs_tol;
  size_t max_subdivisions;
} mdr_quad_config;

/* Library defaults: rel_tol 1e-10, abs_tol 1e-14, 200 subdivisions. */
MDR_API void mdr_quad_config_default(mdr_quad_config* cfg);

/* ---- units --------------------------------------------------------------- */

typedef enum mdr_quantity {
  MDR_ENERGY = 0,
  MDR_FREQUENCY,
  MDR_TIME,
  MDR_MASS,
  MDR_VISCOSITY,
  MDR_POWER,
  MDR_SUSCEPTIBILITY,
  MDR_SPECTRUM
} mdr_quantity;

typedef struct mdr_units {
  double hbar;
  double c;
} mdr_units;

MDR_API mdr_status mdr_units_to_natural(const mdr_units* units, mdr_quantity q, double value,
                                        double* out);
MDR_API mdr_status mdr_units_from_natural(const mdr_units* units, mdr_quantity q, double value,
                                          double* out);

/* ---- models -------------------------------------------------------------- */

MDR_API mdr_status mdr_model_create_perfect(mdr_model** out);
MDR_API mdr_status mdr_model_create_lorentzian(double tau0, mdr_model** out);
/* Coefficients in ascending powers of i*omega. */
MDR_API mdr_status mdr_model_create_rational(const double* r_num, size_t r_num_len,
                                             const double* r_den, size_t r_den_len,
                                             const double* s_num, size_t s_num_len,
                                             const double* s_den, size_t s_den_len,
                                             mdr_model** out);

/* Amplitudes from user code; must be thread safe. cutoff <= 0 means none. */
typedef void (*mdr_amplitude_fn)(double omega, void* user_data, mdr_complex* r, mdr_complex* s);
MDR_API mdr_status mdr_model_create_callback(mdr_amplitude_fn fn, void* user_data, double cutoff,
                                             int transparent, mdr_model** out);

MDR_API void mdr_model_destroy(mdr_model* model);

typedef struct mdr_model_info {
  const char* kind; /* static string: "perfect", "lorentzian", "rational", "callback" */
  int has_cutoff;
  double cutoff;
  double reference_frequency;
  int transparent;
  int perfect;
  double reflection_r0;
  double delay_tau0;
} mdr_model_info;

MDR_API mdr_status mdr_model_get_info(const mdr_model* model, mdr_model_info* info);

MDR_API mdr_status mdr_model_amplitudes(const mdr_model* model, double omega, mdr_complex* r,
                                        mdr_complex* s);
MDR_API mdr_status mdr_reflection_probability(const mdr_model* model, double omega, double* out);
MDR_API mdr_status mdr_scattering_delay(const mdr_model* model, double omega, double* out);
MDR_API mdr_status mdr_alpha_kernel(const mdr_model* model, double omega1, double omega2,
                                    mdr_complex* out);
/* a = 2R and b = 2(1 - 2R) tau, directly and through the amplitude products. */
MDR_API mdr_status mdr_a_function(const mdr_model* model, double omega, double* out);
MDR_API mdr_status mdr_a_function_complex_form(const mdr_model* model, double omega,
                                               mdr_complex* out);
MDR_API mdr_status mdr_b_function(const mdr_model* model, double omega, double* out);
MDR_API mdr_status mdr_b_function_complex_form(const mdr_model* model, double omega,
                                               mdr_complex* out);

typedef struct mdr_violation {
  double value;
  double worst_omega;
} mdr_violation;

typedef struct mdr_validation_report {
  mdr_violation unitarity_norm;
  mdr_violation unitarity_cross;
  mdr_violation reality;
  mdr_violation transparency;
  int transparency_checked;
  double tolerance;
  double transparency_tolerance;
  int passed;
} mdr_validation_report;

/* grid == NULL selects the default 1000-point log grid around the cutoff. */
MDR_API mdr_status mdr_validate_model(const mdr_model* model, const double* grid, size_t grid_len,
                                      double tolerance, mdr_validation_report* report);

/* ---- susceptibility ------------------------------------------------------ */

typedef struct mdr_chi_value {
  double omega;
  mdr_complex chi_vacuum;
  mdr_complex chi_thermal;
  mdr_complex chi_total;
  double error_estimate;
} mdr_chi_value;

/* cfg may be NULL for the defaults. temperature 0 gives the vacuum part only. */
MDR_API mdr_status mdr_chi(const mdr_model* model, double omega, double temperature,
                           const mdr_quad_config* cfg, mdr_chi_value* out);
/* Evaluates a frequency list in parallel; out[i] belongs to omegas[i]. */
MDR_API mdr_status mdr_chi_grid(const mdr_model* model, const double* omegas, size_t count,
                                double temperature, const mdr_quad_config* cfg,
                                mdr_chi_value* out);
/* Thermal correction with n_T replaced by 1/2. */
MDR_API mdr_status mdr_chi_zero_point(const mdr_model* model, double omega,
                                      const mdr_quad_config* cfg, mdr_complex* out,
                                      double* error_estimate);
MDR_API mdr_status mdr_correlation_spectrum(const mdr_model* model, double omega,
                                            double temperature, const mdr_quad_config* cfg,
                                            double* out);
MDR_API mdr_status mdr_correlation_zero_frequency(const mdr_model* model, double temperature,
                                                  const mdr_quad_config* cfg, double* out);
/* lambda = lim Im chi / omega and mu = lim Re chi / omega^2. */
MDR_API mdr_status mdr_low_frequency_expansion(const mdr_model* model, double temperature,
                                               const mdr_quad_config* cfg, double* lambda,
                                               double* mu);
MDR_API mdr_status mdr_vacuum_cubic_coefficient(const mdr_model* model,
                                                const mdr_quad_config* cfg, double* out);

typedef struct mdr_kk_report {
  double max_discrepancy;
  double worst_omega;
  double odd_residual;
  double even_residual;
  int symmetric_grid;
  int window_warning;
  size_t interior_points;
  double peak;
  double lambda;
  double mu;
} mdr_kk_report;

MDR_API mdr_status mdr_kramers_kronig_check(const mdr_model* model, double temperature,
                                            double omega_lo, double omega_hi, size_t count,
                                            const mdr_quad_config* cfg, mdr_kk_report* report);

/* ---- quasistatic coefficients -------------------------------------------- */

/* Deliberate fault: flip the sign of b in the spectral mass-correction route. */
#define MDR_HOOK_FLIP_B_SPECTRAL 1u

typedef struct mdr_coefficients {
  double temperature;
  double lambda_spectral;
  double lambda_entropic;
  double mu_spectral;
  double mu_entropic;
  double energy_flux;      /* A(T) */
  double stocked_quantity; /* B(T) */
  double route_discrepancy_lambda;
  double route_discrepancy_mu;
  double err_lambda;
  double err_mu;
  double err_energy_flux;
  double err_stocked_quantity;
  int converged;
} mdr_coefficients;

MDR_API mdr_status mdr_coefficients_compute(const mdr_model* model, double temperature,
                                            const mdr_quad_config* cfg, unsigned hooks,
                                            mdr_coefficients* out);
/* Temperatures are evaluated in parallel; out[i] belongs to temperatures[i]. */
MDR_API mdr_status mdr_temperature_sweep(const mdr_model* model, const double* temperatures,
                                         size_t count, const mdr_quad_config* cfg,
                                         unsigned hooks, mdr_coefficients* out);

typedef struct mdr_asymptotics {
  double omega_c_effective; /* +inf for the perfect mirror */
  double delta_s;
  double reflection_r0;
  double delay_tau0;
  double temperature;
  double lambda_high_t;
  double lambda_low_t;
  double mu_high_t;
  double mu_low_t;
  double energy_flux_high_t;
  double energy_flux_low_t;
} mdr_asymptotics;

MDR_API mdr_status mdr_asymptotics_compute(const mdr_model* model, double temperature,
                                           const mdr_quad_config* cfg, mdr_asymptotics* out);

typedef struct mdr_einstein_report {
  double half_c_zero;
  double t_lambda;
  double discrepancy;
} mdr_einstein_report;

MDR_API mdr_status mdr_einstein_check(const mdr_model* model, double temperature,
                                      const mdr_quad_config* cfg, double lambda_scale,
                                      mdr_einstein_report* out);

typedef struct mdr_mass_bound_report {
  int cutoff_checked;
  double cutoff_ratio;
  int cutoff_ok;
  double mass_ratio;
  int mass_ok;
  int regime_warning;
  double mu;
} mdr_mass_bound_report;

MDR_API mdr_status mdr_mass_bound_check(const mdr_model* model, double temperature,
                                        double mirror_mass, const mdr_quad_config* cfg,
                                        mdr_mass_bound_report* out);

/*
 * F = -(lambda q' + mu q'') at the count - 2 interior samples of a uniformly
 * sampled trajectory. force must hold count - 2 values. validity_rate <= 0
 * disables the slow-motion warning.
 */
MDR_API mdr_status mdr_quasistatic_force(const mdr_coefficients* coefficients, const double* t,
                                         const double* q, size_t count, double validity_rate,
                                         double* force, int* quasistatic_warning,
                                         double* characteristic_rate);

/* ---- configuration files ------------------------------------------------- */

MDR_API mdr_status mdr_config_load_file(const char* path, mdr_config** out);
MDR_API mdr_status mdr_config_parse(const char* text, mdr_config** out);
MDR_API void mdr_config_destroy(mdr_config* config);

MDR_API mdr_status mdr_config_set(mdr_config* config, const char* key, const char* value);
MDR_API int mdr_config_has(const mdr_config* config, const char* key);
MDR_API size_t mdr_config_key_count(const mdr_config* config);
/* Strings returned through const char** stay valid until the config changes or is destroyed. */
MDR_API mdr_status mdr_config_key_at(const mdr_config* config, size_t index, const char** key);
MDR_API mdr_status mdr_config_get_string(const mdr_config* config, const char* key,
                                         const char** value);
MDR_API mdr_status mdr_config_get_double(const mdr_config* config, const char* key,
                                         double* value);
MDR_API mdr_status mdr_config_get_count(const mdr_config* config, const char* key,
                                        size_t* value);
/* Writes at most capacity values; *length receives the full list length. */
MDR_API mdr_status mdr_config_get_list(const mdr_config* config, const char* key, double* values,
                                       size_t capacity, size_t* length);
/* Relative paths resolve against the directory of the loaded file. */
MDR_API mdr_status mdr_config_get_path(const mdr_config* config, const char* key,
                                       const char** path);

MDR_API mdr_status mdr_config_units(const mdr_config* config, mdr_units* units);
MDR_API mdr_status mdr_config_quadrature(const mdr_config* config, mdr_quad_config* cfg);
/* Builds the [model] section in natural units. */
MDR_API mdr_status mdr_config_create_model(const mdr_config* config, mdr_model** out);

#ifdef __cplusplus
}
#endif

#endif /* MIRRORDRAG_MIRRORDRAG_H */
