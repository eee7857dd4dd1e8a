#include "mirrordrag/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mirrordrag/error.hpp"
#include "mirrordrag/quadrature.hpp"

namespace mirrordrag {

namespace {

constexpr Complex kI(0.0, 1.0);

double step_scale(const MirrorModel& model, double omega) {
  return std::max(std::abs(omega), model.reference_frequency());
}

// Value and first two z-derivatives of a polynomial with ascending coefficients.
struct PolyValue {
  Complex p, dp, d2p;
};

PolyValue horner(const std::vector<double>& c, Complex z) {
  PolyValue v{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    v.d2p = v.d2p * z + 2.0 * v.dp;
    v.dp = v.dp * z + v.p;
    v.p = v.p * z + *it;
  }
  return v;
}

// Quotient N/D and its first two derivatives with respect to z.
struct Quotient {
  Complex q, dq, d2q;
};

Quotient quotient(const std::vector<double>& num, const std::vector<double>& den, Complex z) {
  const PolyValue n = horner(num, z);
  const PolyValue d = horner(den, z);
  Quotient out;
  out.q = n.p / d.p;
  out.dq = (n.dp - out.q * d.dp) / d.p;
  out.d2q = (n.d2p - 2.0 * out.dq * d.dp - out.q * d.d2p) / d.p;
  return out;
}

std::size_t effective_degree(const std::vector<double>& c) {
  std::size_t deg = c.size();
  while (deg > 0 && c[deg - 1] == 0.0) --deg;
  return deg == 0 ? 0 : deg - 1;
}

bool all_zero(const std::vector<double>& c) {
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

double phase_offset(const MirrorModel& model, double omega, Complex centre) {
  const Complex d = scattering_determinant(model, omega) / centre;
  const double phi = std::arg(d);
  if (!std::isfinite(phi) || std::abs(phi) > 0.5 * pi) {
    std::ostringstream msg;
    msg << "phase jump of the scattering determinant near omega = " << omega;
    throw Error(ErrorCode::derivative_unavailable, msg.str());
  }
  return phi;
}

Complex checked_centre(const MirrorModel& model, double omega) {
  const Complex centre = scattering_determinant(model, omega);
  if (!(std::abs(centre) > 1e-8) || !std::isfinite(std::abs(centre))) {
    std::ostringstream msg;
    msg << "scattering determinant degenerate at omega = " << omega;
    throw Error(ErrorCode::derivative_unavailable, msg.str());
  }
  return centre;
}

void note(Violation& v, double value, double omega) {
  const double val = std::isfinite(value) ? value : HUGE_VAL;
  if (val > v.value) {
    v.value = val;
    v.worst_omega = omega;
  }
}

}  // namespace

double MirrorModel::low_frequency_reflection() const { return std::norm(amplitudes(0.0).r); }

double MirrorModel::low_frequency_delay() const { return scattering_delay(*this, 0.0); }

LorentzianMirror::LorentzianMirror(double tau0) : tau0_(tau0) {
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) {
    throw Error(ErrorCode::domain, "lorentzian mirror requires tau0 > 0");
  }
}

Amplitudes LorentzianMirror::amplitudes(double omega) const {
  const Complex den = 1.0 - kI * omega * tau0_;
  const Complex r = -1.0 / den;
  return {r, 1.0 + r};
}

std::optional<Amplitudes> LorentzianMirror::derivatives(double omega) const {
  const Complex den = 1.0 - kI * omega * tau0_;
  const Complex dr = -kI * tau0_ / (den * den);
  return Amplitudes{dr, dr};
}

std::optional<Amplitudes> LorentzianMirror::second_derivatives(double omega) const {
  const Complex den = 1.0 - kI * omega * tau0_;
  const Complex d2r = 2.0 * tau0_ * tau0_ / (den * den * den);
  return Amplitudes{d2r, d2r};
}

RationalMirror::RationalMirror(Coefficients coefficients) : coeffs_(std::move(coefficients)) {
  for (const auto* c : {&coeffs_.r_num, &coeffs_.r_den, &coeffs_.s_num, &coeffs_.s_den}) {
    if (c->empty()) throw Error(ErrorCode::domain, "rational mirror: empty coefficient list");
    for (double v : *c) {
      if (!std::isfinite(v)) throw Error(ErrorCode::domain, "rational mirror: non-finite coefficient");
    }
  }
  if (all_zero(coeffs_.r_den) || all_zero(coeffs_.s_den)) {
    throw Error(ErrorCode::domain, "rational mirror: zero denominator");
  }
  const bool no_reflection = all_zero(coeffs_.r_num);
  transparent_ =
      no_reflection || effective_degree(coeffs_.r_num) < effective_degree(coeffs_.r_den);

  if (no_reflection || !transparent_) return;
  // Cutoff: highest frequency where R falls to half its peak value.
  std::vector<double> grid;
  std::vector<double> refl;
  for (double lg = -8.0; lg <= 8.0 + 1e-12; lg += 1.0 / 32.0) {
    const double w = std::pow(10.0, lg);
    grid.push_back(w);
    refl.push_back(std::norm(amplitudes(w).r));
  }
  const double peak = *std::max_element(refl.begin(), refl.end());
  if (!(peak > 0.0) || !std::isfinite(peak)) return;
  std::size_t last = 0;
  for (std::size_t i = 0; i < refl.size(); ++i) {
    if (refl[i] >= 0.5 * peak) last = i;
  }
  if (last + 1 >= grid.size()) return;
  double lo = std::log(grid[last]);
  double hi = std::log(grid[last + 1]);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::norm(amplitudes(std::exp(mid)).r) >= 0.5 * peak) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  cutoff_ = std::exp(0.5 * (lo + hi));
}

RationalMirror::Coefficients RationalMirror::lorentzian(double tau0) {
  return Coefficients{{-1.0}, {1.0, -tau0}, {0.0, -tau0}, {1.0, -tau0}};
}

Amplitudes RationalMirror::amplitudes(double omega) const {
  const Complex z(0.0, omega);
  const Complex r = horner(coeffs_.r_num, z).p / horner(coeffs_.r_den, z).p;
  const Complex s = horner(coeffs_.s_num, z).p / horner(coeffs_.s_den, z).p;
  return {r, s};
}

std::optional<Amplitudes> RationalMirror::derivatives(double omega) const {
  const Complex z(0.0, omega);
  // d/domega = i d/dz
  return Amplitudes{kI * quotient(coeffs_.r_num, coeffs_.r_den, z).dq,
                    kI * quotient(coeffs_.s_num, coeffs_.s_den, z).dq};
}

std::optional<Amplitudes> RationalMirror::second_derivatives(double omega) const {
  const Complex z(0.0, omega);
  return Amplitudes{-quotient(coeffs_.r_num, coeffs_.r_den, z).d2q,
                    -quotient(coeffs_.s_num, coeffs_.s_den, z).d2q};
}

CallbackMirror::CallbackMirror(Function fn, std::optional<double> cutoff, bool transparent)
    : fn_(std::move(fn)), cutoff_(cutoff), transparent_(transparent) {
  if (!fn_) throw Error(ErrorCode::domain, "callback mirror: empty function");
  if (cutoff_ && !(*cutoff_ > 0.0)) {
    throw Error(ErrorCode::domain, "callback mirror: cutoff must be > 0");
  }
}

Amplitudes amplitude_derivatives(const MirrorModel& model, double omega) {
  if (auto exact = model.derivatives(omega)) return *exact;
  const double scale = step_scale(model, omega);
  return {differentiate([&](double w) { return model.amplitudes(w).r; }, omega, scale),
          differentiate([&](double w) { return model.amplitudes(w).s; }, omega, scale)};
}

double reflection_probability(const MirrorModel& model, double omega) {
  return std::norm(model.amplitudes(omega).r);
}

double reflection_probability_derivative(const MirrorModel& model, double omega) {
  if (auto exact = model.derivatives(omega)) {
    const Complex r = model.amplitudes(omega).r;
    return 2.0 * (std::conj(r) * exact->r).real();
  }
  return differentiate([&](double w) { return reflection_probability(model, w); }, omega,
                       step_scale(model, omega));
}

Complex scattering_determinant(const MirrorModel& model, double omega) {
  const Amplitudes a = model.amplitudes(omega);
  return a.s * a.s - a.r * a.r;
}

double scattering_delay(const MirrorModel& model, double omega) {
  if (auto d1 = model.derivatives(omega)) {
    const Amplitudes a = model.amplitudes(omega);
    const Complex det = checked_centre(model, omega);
    const Complex ddet = 2.0 * (a.s * d1->s - a.r * d1->r);
    return 0.5 * (ddet / det).imag();
  }
  const Complex centre = checked_centre(model, omega);
  const double scale = step_scale(model, omega);
  return 0.5 * differentiate([&](double w) { return phase_offset(model, w, centre); }, omega,
                             scale);
}

double scattering_delay_derivative(const MirrorModel& model, double omega) {
  auto d1 = model.derivatives(omega);
  auto d2 = model.second_derivatives(omega);
  const double scale = step_scale(model, omega);
  if (d1 && d2) {
    const Amplitudes a = model.amplitudes(omega);
    const Complex det = checked_centre(model, omega);
    const Complex ddet = 2.0 * (a.s * d1->s - a.r * d1->r);
    const Complex d2det = 2.0 * (d1->s * d1->s + a.s * d2->s - d1->r * d1->r - a.r * d2->r);
    const Complex ratio = ddet / det;
    return 0.5 * (d2det / det - ratio * ratio).imag();
  }
  if (d1) {
    return differentiate([&](double w) { return scattering_delay(model, w); }, omega, scale);
  }
  const Complex centre = checked_centre(model, omega);
  return 0.5 * second_derivative([&](double w) { return phase_offset(model, w, centre); }, omega,
                                 scale);
}

std::vector<double> unwrapped_phase(const MirrorModel& model, std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double raw = std::arg(scattering_determinant(model, grid[i]));
    if (i == 0) {
      out.push_back(raw);
    } else {
      const double jump = std::remainder(raw - previous, 2.0 * pi);
      out.push_back(out.back() + jump);
    }
    previous = raw;
  }
  return out;
}

Complex alpha_kernel(const MirrorModel& model, double omega1, double omega2) {
  const Amplitudes a = model.amplitudes(omega1);
  const Amplitudes b = model.amplitudes(omega2);
  return 1.0 + a.r * b.r - a.s * b.s;
}

double a_function(const MirrorModel& model, double omega) {
  return 2.0 * reflection_probability(model, omega);
}

Complex a_function_complex_form(const MirrorModel& model, double omega) {
  const Amplitudes p = model.amplitudes(omega);
  const Amplitudes m = model.amplitudes(-omega);
  return 1.0 + p.r * m.r - p.s * m.s;
}

double a_function_derivative(const MirrorModel& model, double omega) {
  return 2.0 * reflection_probability_derivative(model, omega);
}

double b_function(const MirrorModel& model, double omega) {
  return 2.0 * (1.0 - 2.0 * reflection_probability(model, omega)) *
         scattering_delay(model, omega);
}

Complex b_function_complex_form(const MirrorModel& model, double omega) {
  const Amplitudes p = model.amplitudes(omega);
  const Amplitudes m = model.amplitudes(-omega);
  const Amplitudes dp = amplitude_derivatives(model, omega);
  const Amplitudes dm = amplitude_derivatives(model, -omega);
  return kI * (dp.r * m.r + p.r * dm.r) - kI * (dp.s * m.s + p.s * dm.s);
}

double b_function_derivative(const MirrorModel& model, double omega) {
  const double refl = reflection_probability(model, omega);
  return -4.0 * reflection_probability_derivative(model, omega) * scattering_delay(model, omega) +
         2.0 * (1.0 - 2.0 * refl) * scattering_delay_derivative(model, omega);
}

bool ValidationReport::passed() const {
  const bool core = unitarity_norm.value <= tolerance && unitarity_cross.value <= tolerance &&
                    reality.value <= tolerance;
  return core && (!transparency_checked || transparency.value <= transparency_tolerance);
}

std::string ValidationReport::describe() const {
  std::ostringstream out;
  out.precision(6);
  auto line = [&](const char* name, const Violation& v, double tol) {
    out << "  " << name << ": max violation " << v.value << " at omega = " << v.worst_omega
        << (v.value <= tol ? "" : "  [VIOLATED]") << '\n';
  };
  line("|s|^2 + |r|^2 = 1", unitarity_norm, tolerance);
  line("s r* + r s* = 0", unitarity_cross, tolerance);
  line("r[-w] = r[w]*, s[-w] = s[w]*", reality, tolerance);
  if (transparency_checked) {
    line("|r| -> 0 above cutoff", transparency, transparency_tolerance);
  } else {
    out << "  |r| -> 0 above cutoff: skipped (no cutoff)\n";
  }
  return out.str();
}

std::vector<double> default_validation_grid(const MirrorModel& model, std::size_t n) {
  std::vector<double> grid;
  if (n == 0) return grid;
  grid.reserve(n);
  const double ref = model.reference_frequency();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    grid.push_back(ref * std::pow(10.0, -3.0 + 6.0 * t));
  }
  return grid;
}

ValidationReport validate_model(const MirrorModel& model, std::span<const double> grid,
                                double tolerance) {
  if (grid.empty()) throw Error(ErrorCode::domain, "validate_model: empty frequency grid");
  ValidationReport report;
  report.tolerance = tolerance;
  for (double w : grid) {
    if (!std::isfinite(w)) throw Error(ErrorCode::domain, "validate_model: non-finite frequency");
    const Amplitudes p = model.amplitudes(w);
    const Amplitudes m = model.amplitudes(-w);
    note(report.unitarity_norm, std::abs(std::norm(p.s) + std::norm(p.r) - 1.0), w);
    note(report.unitarity_cross, std::abs(p.s * std::conj(p.r) + p.r * std::conj(p.s)), w);
    note(report.reality,
         std::max(std::abs(m.r - std::conj(p.r)), std::abs(m.s - std::conj(p.s))), w);
  }
  if (auto cutoff = model.cutoff_frequency()) {
    report.transparency_checked = true;
    // Far above the cutoff |r| must have decayed; take the largest value on a sparse probe.
    for (double k = 4.0; k <= 8.0; k += 1.0) {
      const double w = *cutoff * std::pow(10.0, k);
      note(report.transparency, std::abs(model.amplitudes(w).r), w);
    }
  }
  return report;
}

void require_valid(const MirrorModel& model, std::span<const double> grid, double tolerance) {
  const ValidationReport report = validate_model(model, grid, tolerance);
  if (!report.passed()) {
    throw Error(ErrorCode::validation_failed,
                "model '" + std::string(model.kind()) + "' failed validation:\n" + report.describe());
  }
}

}  // namespace mirrordrag
