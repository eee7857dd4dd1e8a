#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "mirrordrag/mirrordrag.h"

namespace mdrcli {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kDefaultRouteTolerance = 1e-6;
constexpr double kValidationTolerance = 1e-10;

// Thrown to leave a command with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

int exit_code_for(mdr_status s) {
  switch (s) {
    case MDR_CONFIG:
    case MDR_IO:
    case MDR_INVALID_ARGUMENT:
    case MDR_DOMAIN:
    case MDR_GRID_TOO_COARSE:
      return exit_config;
    case MDR_VALIDATION_FAILED:
      return exit_validation;
    default:
      return exit_numerical;
  }
}

void check(mdr_status s, const std::string& what) {
  if (s != MDR_OK) {
    throw Exit{exit_code_for(s), what + ": " + mdr_status_string(s) + ": " + mdr_last_error()};
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

using ModelPtr = std::unique_ptr<mdr_model, decltype(&mdr_model_destroy)>;
using ConfigPtr = std::unique_ptr<mdr_config, decltype(&mdr_config_destroy)>;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "hbar",       "c",           "rel_tol",     "abs_tol",
      "max_subdivisions", "tolerance", "temperature", "t_min",
      "t_max",      "t_count",     "t_spacing",   "omega_min",
      "omega_max",  "omega_count", "omegas",      "trajectory",
      "mass",       "verify_temperatures", "kk_half_width", "kk_points"};
  return keys;
}

struct Options {
  std::string config;
  std::string out;
  double tol = -1.0;
  std::vector<std::string> overrides;
  std::string fault;
};

// Everything a command needs: the parsed config, units and the model.
class Run {
 public:
  Run(const Options& opts, std::ostream& out, std::ostream& err)
      : out_(out), err_(err), opts_(opts), cfg_(nullptr, &mdr_config_destroy),
        model_(nullptr, &mdr_model_destroy) {
    mdr_config* raw = nullptr;
    check(mdr_config_load_file(opts.config.c_str(), &raw), "loading config");
    cfg_.reset(raw);
    for (const auto& kv : opts.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Exit{exit_config, "--set expects key=value, got '" + kv + "'"};
      check(mdr_config_set(cfg_.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()),
            "--set " + kv);
    }
    const std::size_t n = mdr_config_key_count(cfg_.get());
    for (std::size_t i = 0; i < n; ++i) {
      const char* key = nullptr;
      check(mdr_config_key_at(cfg_.get(), i, &key), "reading config keys");
      const std::string k = key;
      if (k.rfind("model.", 0) != 0 && known_keys().count(k) == 0) {
        throw Exit{exit_config, "unknown config key '" + k + "'"};
      }
    }
    check(mdr_config_units(cfg_.get(), &units_), "units");
    check(mdr_config_quadrature(cfg_.get(), &quad_), "quadrature settings");
    mdr_model* m = nullptr;
    check(mdr_config_create_model(cfg_.get(), &m), "model");
    model_.reset(m);
    check(mdr_model_get_info(model_.get(), &info_), "model");
    tolerance_ = opts.tol > 0.0 ? opts.tol : get("tolerance", kDefaultRouteTolerance);
    if (!(tolerance_ > 0.0)) throw Exit{exit_config, "tolerance must be positive"};
  }

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  const mdr_model* model() const { return model_.get(); }
  const mdr_model_info& info() const { return info_; }
  const mdr_quad_config& quad() const { return quad_; }
  double tolerance() const { return tolerance_; }
  const Options& options() const { return opts_; }

  bool has(const char* key) const { return mdr_config_has(cfg_.get(), key) != 0; }

  double get(const char* key) const {
    double v = 0.0;
    check(mdr_config_get_double(cfg_.get(), key, &v), "config");
    return v;
  }
  double get(const char* key, double fallback) const { return has(key) ? get(key) : fallback; }

  std::size_t count(const char* key) const {
    std::size_t v = 0;
    check(mdr_config_get_count(cfg_.get(), key, &v), "config");
    return v;
  }
  std::size_t count(const char* key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const char* v = nullptr;
    check(mdr_config_get_string(cfg_.get(), key, &v), "config");
    return v;
  }

  std::vector<double> list(const char* key) const {
    std::size_t n = 0;
    check(mdr_config_get_list(cfg_.get(), key, nullptr, 0, &n), "config");
    std::vector<double> v(n);
    check(mdr_config_get_list(cfg_.get(), key, v.data(), v.size(), &n), "config");
    return v;
  }

  std::string path(const char* key) const {
    const char* v = nullptr;
    check(mdr_config_get_path(cfg_.get(), key, &v), "config");
    return v;
  }

  double to_natural(mdr_quantity q, double v) const {
    double out = 0.0;
    check(mdr_units_to_natural(&units_, q, v, &out), "unit conversion");
    return out;
  }
  double from_natural(mdr_quantity q, double v) const {
    double out = 0.0;
    check(mdr_units_from_natural(&units_, q, v, &out), "unit conversion");
    return out;
  }

  // Temperature from the config, in natural units.
  double temperature(bool allow_zero) const {
    const double t = get("temperature");
    if (t < 0.0 || (!allow_zero && t == 0.0) || !std::isfinite(t)) {
      throw Exit{exit_config, allow_zero ? "temperature must be >= 0" : "temperature must be > 0"};
    }
    return to_natural(MDR_ENERGY, t);
  }

  mdr_validation_report validate() const {
    mdr_validation_report rep{};
    check(mdr_validate_model(model_.get(), nullptr, 0, kValidationTolerance, &rep), "validation");
    return rep;
  }

  void require_valid_model() {
    const mdr_validation_report rep = validate();
    if (!rep.passed) {
      write_validation(err_, rep);
      throw Exit{exit_validation, std::string("model '") + info_.kind + "' failed validation"};
    }
  }

  void write_validation(std::ostream& os, const mdr_validation_report& rep) const {
    const auto line = [&](const char* name, const mdr_violation& v, double allowed) {
      os << (v.value <= allowed ? "ok    " : "FAIL  ") << name << ": max " << brief(v.value)
         << " at omega = " << num(from_natural(MDR_FREQUENCY, v.worst_omega)) << " (allowed "
         << brief(allowed) << ")\n";
    };
    line("unitarity |r|^2 + |s|^2 - 1", rep.unitarity_norm, rep.tolerance);
    line("unitarity s r* + r s*", rep.unitarity_cross, rep.tolerance);
    line("reality r[-w] = r[w]*", rep.reality, rep.tolerance);
    if (rep.transparency_checked) {
      line("transparency |r| above cutoff", rep.transparency, rep.transparency_tolerance);
    }
  }

  // Writes to --out when given, otherwise to stdout.
  template <typename F>
  void emit(F&& write) {
    if (opts_.out.empty()) {
      write(out_);
      return;
    }
    std::ofstream file(opts_.out, std::ios::binary);
    if (!file) throw Exit{exit_config, "cannot open output file '" + opts_.out + "'"};
    write(file);
    if (!file) throw Exit{exit_config, "failed writing '" + opts_.out + "'"};
  }

  unsigned hooks() const {
    if (opts_.fault.empty()) return 0;
    if (opts_.fault == "flip-b") return MDR_HOOK_FLIP_B_SPECTRAL;
    throw Exit{exit_config, "unknown fault '" + opts_.fault + "'"};
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  Options opts_;
  ConfigPtr cfg_;
  ModelPtr model_;
  mdr_units units_{1.0, 1.0};
  mdr_quad_config quad_{};
  mdr_model_info info_{};
  double tolerance_ = kDefaultRouteTolerance;
};

const char* const kSweepHeader =
    "temperature,lambda_spectral,lambda_entropic,mu_spectral,mu_entropic,A,B,err_lambda,err_mu\n";

void write_coefficient_row(std::ostream& os, const Run& run, const mdr_coefficients& c) {
  os << num(run.from_natural(MDR_ENERGY, c.temperature)) << ','
     << num(run.from_natural(MDR_VISCOSITY, c.lambda_spectral)) << ','
     << num(run.from_natural(MDR_VISCOSITY, c.lambda_entropic)) << ','
     << num(run.from_natural(MDR_MASS, c.mu_spectral)) << ','
     << num(run.from_natural(MDR_MASS, c.mu_entropic)) << ','
     << num(run.from_natural(MDR_POWER, c.energy_flux)) << ','
     << num(run.from_natural(MDR_ENERGY, c.stocked_quantity)) << ','
     << num(run.from_natural(MDR_VISCOSITY, c.err_lambda)) << ','
     << num(run.from_natural(MDR_MASS, c.err_mu)) << '\n';
}

bool route_ok(const mdr_coefficients& c, double tol) {
  return c.route_discrepancy_lambda <= tol && c.route_discrepancy_mu <= tol;
}

int cmd_coeffs(Run& run) {
  run.require_valid_model();
  const double t = run.temperature(false);
  mdr_coefficients c{};
  check(mdr_coefficients_compute(run.model(), t, &run.quad(), run.hooks(), &c), "coefficients");
  auto& os = run.out();
  const auto line = [&](const char* name, double v) { os << name << " = " << num(v) << '\n'; };
  line("temperature", run.from_natural(MDR_ENERGY, c.temperature));
  line("lambda_spectral", run.from_natural(MDR_VISCOSITY, c.lambda_spectral));
  line("lambda_entropic", run.from_natural(MDR_VISCOSITY, c.lambda_entropic));
  line("mu_spectral", run.from_natural(MDR_MASS, c.mu_spectral));
  line("mu_entropic", run.from_natural(MDR_MASS, c.mu_entropic));
  line("A", run.from_natural(MDR_POWER, c.energy_flux));
  line("B", run.from_natural(MDR_ENERGY, c.stocked_quantity));
  line("route_discrepancy_lambda", c.route_discrepancy_lambda);
  line("route_discrepancy_mu", c.route_discrepancy_mu);
  line("err_lambda", run.from_natural(MDR_VISCOSITY, c.err_lambda));
  line("err_mu", run.from_natural(MDR_MASS, c.err_mu));
  line("err_A", run.from_natural(MDR_POWER, c.err_energy_flux));
  line("err_B", run.from_natural(MDR_ENERGY, c.err_stocked_quantity));
  if (!run.options().out.empty()) {
    run.emit([&](std::ostream& f) {
      f << kSweepHeader;
      write_coefficient_row(f, run, c);
    });
  }
  if (!c.converged) run.err() << "warning: quadrature stopped at the subdivision limit\n";
  if (!route_ok(c, run.tolerance())) {
    throw Exit{exit_route_discrepancy, "route discrepancy exceeds tolerance " +
                                           brief(run.tolerance()) + " (lambda " +
                                           brief(c.route_discrepancy_lambda) + ", mu " +
                                           brief(c.route_discrepancy_mu) + ")"};
  }
  return exit_ok;
}

std::vector<double> sweep_temperatures(const Run& run) {
  const double lo = run.get("t_min");
  const double hi = run.get("t_max");
  const std::size_t n = run.count("t_count");
  const std::string spacing = run.text("t_spacing", "log");
  if (!(lo > 0.0)) throw Exit{exit_config, "t_min must be > 0"};
  if (!(hi > lo)) throw Exit{exit_config, "t_max must exceed t_min"};
  if (n < 2) throw Exit{exit_config, "t_count must be at least 2"};
  if (spacing != "log" && spacing != "linear") {
    throw Exit{exit_config, "t_spacing must be log or linear"};
  }
  std::vector<double> temps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    temps[i] = spacing == "log" ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                : lo + f * (hi - lo);
  }
  temps.front() = lo;
  temps.back() = hi;
  return temps;
}

int cmd_sweep(Run& run) {
  run.require_valid_model();
  std::vector<double> temps = sweep_temperatures(run);
  for (double& t : temps) t = run.to_natural(MDR_ENERGY, t);
  std::vector<mdr_coefficients> rows(temps.size());
  check(mdr_temperature_sweep(run.model(), temps.data(), temps.size(), &run.quad(), run.hooks(),
                              rows.data()),
        "sweep");
  run.emit([&](std::ostream& os) {
    os << kSweepHeader;
    for (const auto& c : rows) write_coefficient_row(os, run, c);
  });
  double worst = 0.0;
  for (const auto& c : rows) {
    worst = std::max({worst, c.route_discrepancy_lambda, c.route_discrepancy_mu});
  }
  if (worst > run.tolerance()) {
    throw Exit{exit_route_discrepancy, "route discrepancy " + brief(worst) +
                                           " exceeds tolerance " + brief(run.tolerance())};
  }
  return exit_ok;
}

std::vector<double> chi_grid(const Run& run) {
  std::vector<double> w;
  if (run.has("omegas")) {
    if (run.has("omega_min") || run.has("omega_max") || run.has("omega_count")) {
      throw Exit{exit_config, "give either omegas or omega_min/omega_max/omega_count"};
    }
    w = run.list("omegas");
  } else {
    const double lo = run.get("omega_min");
    const double hi = run.get("omega_max");
    const std::size_t n = run.count("omega_count");
    if (n < 1) throw Exit{exit_config, "omega_count must be at least 1"};
    if (n == 1 && hi != lo) throw Exit{exit_config, "a single frequency needs omega_min = omega_max"};
    if (n > 1 && !(hi > lo)) throw Exit{exit_config, "omega_max must exceed omega_min"};
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Weighted form keeps a grid symmetric about zero exactly symmetric.
      const double k = static_cast<double>(i);
      const double m = static_cast<double>(n - 1);
      w[i] = n == 1 ? lo : (lo * (m - k) + hi * k) / m;
    }
  }
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!(w[i] > w[i - 1])) throw Exit{exit_config, "frequency grid must be strictly increasing"};
  }
  return w;
}

int cmd_chi(Run& run) {
  run.require_valid_model();
  const double t = run.temperature(true);
  const std::vector<double> user = chi_grid(run);
  std::vector<double> w(user.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = run.to_natural(MDR_FREQUENCY, user[i]);
  std::vector<mdr_chi_value> values(w.size());
  check(mdr_chi_grid(run.model(), w.data(), w.size(), t, &run.quad(), values.data()),
        "susceptibility");
  run.emit([&](std::ostream& os) {
    os << "omega,re_chi_vacuum,im_chi_vacuum,re_chi_thermal,im_chi_thermal,re_chi_total,"
          "im_chi_total,err\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& v = values[i];
      const auto chi = [&](double x) { return num(run.from_natural(MDR_SUSCEPTIBILITY, x)); };
      os << num(user[i]) << ',' << chi(v.chi_vacuum.re) << ',' << chi(v.chi_vacuum.im) << ','
         << chi(v.chi_thermal.re) << ',' << chi(v.chi_thermal.im) << ',' << chi(v.chi_total.re)
         << ',' << chi(v.chi_total.im) << ',' << chi(v.error_estimate) << '\n';
    }
  });
  return exit_ok;
}

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

double parse_field(std::string_view field, const std::string& where) {
  const std::string text(trim(field));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v)) {
    throw Exit{exit_config, where + ": not a number: '" + text + "'"};
  }
  return v;
}

void read_trajectory(const std::string& path, std::vector<double>& t, std::vector<double>& q) {
  std::ifstream in(path);
  if (!in) throw Exit{exit_config, "cannot open trajectory file '" + path + "'"};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Exit{exit_config, where + ": expected two comma-separated columns"};
    }
    if (!header) {
      if (trim(row.substr(0, comma)) != "t" || trim(row.substr(comma + 1)) != "q") {
        throw Exit{exit_config, where + ": expected header 't,q'"};
      }
      header = true;
      continue;
    }
    t.push_back(parse_field(row.substr(0, comma), where));
    q.push_back(parse_field(row.substr(comma + 1), where));
  }
  if (!header) throw Exit{exit_config, path + ": empty trajectory file"};
}

int cmd_force(Run& run) {
  run.require_valid_model();
  const double temp = run.temperature(false);
  std::vector<double> t;
  std::vector<double> q;
  read_trajectory(run.path("trajectory"), t, q);
  if (t.size() < 3) {
    throw Exit{exit_config, "trajectory needs at least 3 samples for the central-difference stencil"};
  }
  mdr_coefficients c{};
  check(mdr_coefficients_compute(run.model(), temp, &run.quad(), 0, &c), "coefficients");
  // The trajectory stays in user units, so the coefficients go back to them.
  mdr_coefficients user = c;
  user.lambda_spectral = run.from_natural(MDR_VISCOSITY, c.lambda_spectral);
  user.mu_spectral = run.from_natural(MDR_MASS, c.mu_spectral);
  double rate = temp;
  if (run.info().has_cutoff) rate = std::min(rate, run.info().cutoff);
  rate = run.from_natural(MDR_FREQUENCY, rate);
  std::vector<double> force(t.size() - 2);
  int warning = 0;
  double observed = 0.0;
  check(mdr_quasistatic_force(&user, t.data(), q.data(), t.size(), rate, force.data(), &warning,
                              &observed),
        "trajectory");
  if (warning != 0) {
    run.err() << "warning: trajectory varies at rate " << brief(observed)
              << ", not slow against min(omega_C, T/hbar) = " << brief(rate)
              << "; the quasistatic expansion may not apply\n";
  }
  run.emit([&](std::ostream& os) {
    os << "t,F\n";
    for (std::size_t i = 0; i < force.size(); ++i) os << num(t[i + 1]) << ',' << num(force[i]) << '\n';
  });
  return exit_ok;
}

int cmd_model_info(Run& run) {
  const auto& info = run.info();
  auto& os = run.out();
  os << "kind = " << info.kind << '\n';
  if (run.has("model.tau0")) os << "tau0 = " << num(run.get("model.tau0")) << '\n';
  for (const char* key : {"model.r_num", "model.r_den", "model.s_num", "model.s_den"}) {
    if (!run.has(key)) continue;
    os << (key + 6) << " =";
    const auto coeffs = run.list(key);
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i == 0 ? " " : ", ") << num(coeffs[i]);
    os << '\n';
  }
  if (info.has_cutoff) {
    os << "cutoff_frequency = " << num(run.from_natural(MDR_FREQUENCY, info.cutoff)) << '\n';
  } else {
    os << "cutoff_frequency = none\n";
  }
  os << "low_frequency_reflection = " << num(info.reflection_r0) << '\n';
  os << "low_frequency_delay = " << num(run.from_natural(MDR_TIME, info.delay_tau0)) << '\n';
  os << "transparent_at_high_frequency = " << (info.transparent ? "yes" : "no") << '\n';
  const mdr_validation_report rep = run.validate();
  if (rep.passed && info.transparent && !info.perfect) {
    mdr_asymptotics a{};
    check(mdr_asymptotics_compute(run.model(), 1.0, &run.quad(), &a), "bandwidth integrals");
    os << "omega_c_effective = " << num(run.from_natural(MDR_FREQUENCY, a.omega_c_effective)) << '\n';
    os << "delta_s = " << num(a.delta_s) << '\n';
  }
  os << "validation:\n";
  run.write_validation(os, rep);
  if (!rep.passed) {
    throw Exit{exit_validation, std::string("model '") + info.kind + "' failed validation"};
  }
  return exit_ok;
}

// ---- verify ---------------------------------------------------------------

struct Check {
  std::string name;
  double measured = 0.0;
  double allowed = 0.0;
  bool pass = false;
  std::string note;
};

class Verifier {
 public:
  explicit Verifier(Run& run) : run_(run) {}

  void record(std::string name, double measured, double allowed, std::string note = {}) {
    Check c{std::move(name), measured, allowed, measured <= allowed && std::isfinite(measured),
            std::move(note)};
    print(c);
    checks_.push_back(std::move(c));
  }

  void skip(const std::string& name, const std::string& why) {
    run_.out() << "SKIP  " << name << "  (" << why << ")\n";
  }

  int finish() {
    const auto failed = std::count_if(checks_.begin(), checks_.end(), [](const Check& c) { return !c.pass; });
    run_.out() << (failed == 0 ? "all " : "") << checks_.size() - static_cast<std::size_t>(failed)
               << " of " << checks_.size() << " checks passed\n";
    return failed == 0 ? exit_ok : exit_verify;
  }

 private:
  void print(const Check& c) {
    auto& os = run_.out();
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  measured " << brief(c.measured)
       << "  allowed " << brief(c.allowed);
    if (!c.note.empty()) os << "  " << c.note;
    os << '\n';
  }

  Run& run_;
  std::vector<Check> checks_;
};

double rel(double x, double y) {
  const double s = std::max(std::abs(x), std::abs(y));
  return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

std::string at_t(const Run& run, double t_natural) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "[T=%.4g]", run.from_natural(MDR_ENERGY, t_natural));
  return buf;
}

int cmd_verify(Run& run) {
  Verifier v(run);
  const auto& info = run.info();
  const mdr_model* model = run.model();
  const mdr_quad_config& quad = run.quad();
  const double ref = info.reference_frequency;

  const mdr_validation_report rep = run.validate();
  const double unitarity = std::max(rep.unitarity_norm.value, rep.unitarity_cross.value);
  v.record("unitarity", unitarity, rep.tolerance);
  v.record("reality", rep.reality.value, rep.tolerance);
  if (rep.transparency_checked) {
    v.record("transparency", rep.transparency.value, rep.transparency_tolerance);
  }
  if (!rep.passed) {
    run.write_validation(run.err(), rep);
    throw Exit{exit_validation, std::string("model '") + info.kind +
                                    "' failed validation; remaining checks not run"};
  }

  // a and b through the amplitude products against 2R and 2(1 - 2R) tau.
  {
    std::mt19937_64 rng(0x5eed1234u);
    std::uniform_real_distribution<double> decade(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double w = (i % 2 == 0 ? 1.0 : -1.0) * ref * std::pow(10.0, decade(rng));
      double a = 0.0;
      double b = 0.0;
      mdr_complex ac{};
      mdr_complex bc{};
      check(mdr_a_function(model, w, &a), "a");
      check(mdr_a_function_complex_form(model, w, &ac), "a");
      check(mdr_b_function(model, w, &b), "b");
      check(mdr_b_function_complex_form(model, w, &bc), "b");
      worst = std::max({worst, std::abs(ac.re - a), std::abs(ac.im), std::abs(bc.re - b),
                        std::abs(bc.im)});
    }
    v.record("kernel_identities", worst, 1e-10, "(1000 random frequencies)");
  }

  std::vector<double> temps;
  if (run.has("verify_temperatures")) {
    for (double t : run.list("verify_temperatures")) {
      if (!(t > 0.0)) throw Exit{exit_config, "verify_temperatures must be positive"};
      temps.push_back(run.to_natural(MDR_ENERGY, t));
    }
  } else {
    temps = {0.1 * ref, ref, 10.0 * ref};
  }

  const unsigned hooks = run.hooks();
  std::vector<mdr_coefficients> coeffs(temps.size());
  check(mdr_temperature_sweep(model, temps.data(), temps.size(), &quad, hooks, coeffs.data()),
        "coefficients");
  for (const auto& c : coeffs) {
    const std::string tag = at_t(run, c.temperature);
    v.record("dual_route_lambda" + tag, c.route_discrepancy_lambda, run.tolerance());
    v.record("dual_route_mu" + tag, c.route_discrepancy_mu, run.tolerance());
  }
  for (const auto& c : coeffs) {
    const double t = c.temperature;
    v.record("positive_viscosity" + at_t(run, t), c.lambda_spectral > 0.0 ? 0.0 : 1.0, 0.0,
             "lambda = " + num(run.from_natural(MDR_VISCOSITY, c.lambda_spectral)));
  }
  if (info.perfect) {
    for (const auto& c : coeffs) {
      const double t = c.temperature;
      const double exact = 2.0 * kPi * t * t / 3.0;
      v.record("perfect_viscosity" + at_t(run, t), rel(c.lambda_spectral, exact), 1e-8);
      const double mu = std::max(std::abs(c.mu_spectral), std::abs(c.mu_entropic));
      v.record("perfect_mass_correction" + at_t(run, t), mu, 1e-12 * t * t,
               "mu_spectral = " + num(c.mu_spectral) + ", mu_entropic = " + num(c.mu_entropic));
    }
  }

  for (const double t : temps) {
    mdr_einstein_report e{};
    check(mdr_einstein_check(model, t, &quad, 1.0, &e), "Einstein relation");
    v.record("einstein" + at_t(run, t), e.discrepancy, info.perfect ? 1e-4 : 1e-3);
  }

  for (const double t : {0.0, temps[temps.size() / 2]}) {
    mdr_chi_value chi{};
    check(mdr_chi(model, 0.0, t, &quad, &chi), "susceptibility");
    v.record("chi_at_zero_frequency" + at_t(run, t), std::hypot(chi.chi_total.re, chi.chi_total.im),
             quad.abs_tol);
  }

  {
    const double t = temps[temps.size() / 2];
    const auto& c = coeffs[temps.size() / 2];
    double lam = 0.0;
    double mu = 0.0;
    check(mdr_low_frequency_expansion(model, t, &quad, &lam, &mu), "low-frequency expansion");
    v.record("chi_slope_vs_lambda" + at_t(run, t), rel(lam, c.lambda_entropic), 1e-3);
    const double mu_scale = std::max(std::abs(c.mu_entropic), 1e-12 * t * t);
    const double mu_err = std::abs(mu - c.mu_entropic) / mu_scale;
    v.record("chi_curvature_vs_mu" + at_t(run, t), c.mu_entropic == 0.0 && mu == 0.0 ? 0.0 : mu_err,
             1e-2);
  }

  if (info.perfect) {
    double cubic = 0.0;
    check(mdr_vacuum_cubic_coefficient(model, &quad, &cubic), "vacuum cubic coefficient");
    v.record("vacuum_cubic_coefficient", rel(cubic, 1.0 / (6.0 * kPi)), 1e-6, "(against 1/(6 pi))");
    v.skip("kramers_kronig", "the perfect-mirror susceptibility grows like omega^3");
  } else {
    const double t = temps[temps.size() / 2];
    const double half = run.get("kk_half_width", 40.0) * ref;
    const std::size_t n = run.count("kk_points", 4096);
    mdr_kk_report kk{};
    check(mdr_kramers_kronig_check(model, t, -half, half, n, &quad, &kk), "Kramers-Kronig check");
    v.record("kramers_kronig" + at_t(run, t), kk.max_discrepancy, 1e-2,
             kk.window_warning ? "(window edge not negligible)" : "");
  }

  if (info.perfect) {
    v.skip("high_temperature_limits", "no reflection cutoff");
  } else if (!info.transparent) {
    v.skip("asymptotic_limits", "mirror not transparent at high frequency");
  } else {
    const double t_lo = 1e-3 * ref;
    const double t_hi = 100.0 * ref;
    mdr_coefficients lo{};
    mdr_coefficients hi{};
    mdr_asymptotics a_lo{};
    mdr_asymptotics a_hi{};
    check(mdr_coefficients_compute(model, t_lo, &quad, hooks, &lo), "coefficients");
    check(mdr_coefficients_compute(model, t_hi, &quad, hooks, &hi), "coefficients");
    check(mdr_asymptotics_compute(model, t_lo, &quad, &a_lo), "asymptotics");
    check(mdr_asymptotics_compute(model, t_hi, &quad, &a_hi), "asymptotics");
    if (a_lo.lambda_low_t != 0.0) {
      v.record("low_temperature_lambda" + at_t(run, t_lo), rel(lo.lambda_spectral, a_lo.lambda_low_t),
               1e-2);
    } else {
      v.skip("low_temperature_lambda", "R0 = 0, the leading law vanishes");
    }
    if (a_lo.mu_low_t != 0.0) {
      v.record("low_temperature_mu" + at_t(run, t_lo), rel(lo.mu_spectral, a_lo.mu_low_t), 2e-2);
    } else {
      v.skip("low_temperature_mu", "(1 - 2 R0) tau0 = 0, the leading law vanishes");
    }
    v.record("high_temperature_lambda" + at_t(run, t_hi), rel(hi.lambda_spectral, a_hi.lambda_high_t),
             2e-2);
    v.record("high_temperature_mu" + at_t(run, t_hi), std::abs(hi.mu_spectral - a_hi.mu_high_t),
             0.01 * t_hi, "(|mu - T Delta_S| against 0.01 T)");
  }

  if (run.has("mass")) {
    const double m = run.to_natural(MDR_MASS, run.get("mass"));
    const double t = temps.front();
    mdr_mass_bound_report mb{};
    check(mdr_mass_bound_check(model, t, m, &quad, &mb), "mass bound");
    if (mb.cutoff_checked) v.record("cutoff_below_rest_energy", mb.cutoff_ratio, 0.01);
    v.record("mass_correction_below_mass" + at_t(run, t), mb.mass_ratio, 1.0);
    if (mb.regime_warning) run.err() << "warning: T >= omega_C, outside the low-temperature regime\n";
  }

  return v.finish();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Friction and inertia of a partially transmitting mirror in a thermal field"};
  app.name("mirrordrag");
  app.require_subcommand(1, 1);

  Options opts;
  struct Command {
    const char* name;
    const char* help;
    int (*body)(Run&);
  };
  const Command commands[] = {
      {"coeffs", "viscosity and mass correction at one temperature, both routes", cmd_coeffs},
      {"sweep", "coefficients over a temperature range as CSV", cmd_sweep},
      {"chi", "motional susceptibility on a frequency grid as CSV", cmd_chi},
      {"verify", "run the consistency checks for the configured model", cmd_verify},
      {"force", "quasistatic force along a trajectory (CSV t,q in, t,F out)", cmd_force},
      {"model-info", "describe and validate the configured mirror model", cmd_model_info},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", opts.config, "configuration file")->required();
    sub->add_option("--out", opts.out, "output file (default: standard output)");
    sub->add_option("--tol", opts.tol, "relative tolerance for the route cross-checks")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", opts.overrides, "override a config value, key=value")
        ->allow_extra_args(false);
    if (std::string_view(cmd.name) == "verify" || std::string_view(cmd.name) == "coeffs" ||
        std::string_view(cmd.name) == "sweep") {
      sub->add_option("--fault", opts.fault, "inject a deliberate fault (flip-b)")
          ->group("Testing");
    }
    subs.emplace_back(sub, &cmd);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      Run run(opts, out, err);
      return cmd->body(run);
    }
    return exit_config;
  } catch (const Exit& e) {
    if (!e.message.empty()) err << "mirrordrag: " << e.message << '\n';
    return e.code;
  }
}

}  // namespace mdrcli
