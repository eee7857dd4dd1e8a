#include "mirrordrag/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "mirrordrag/error.hpp"

namespace mirrordrag {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod abscissae (descending, last is the centre) and weights,
// with the embedded 10-point Gauss weights on the odd Kronrod nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208643474262, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  Complex value{};
  double error = 0.0;
};

// QUADPACK-style error estimate for one real component.
double component_error(double kronrod, double gauss, double resabs, double resasc) {
  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double floor = 50.0 * kEps * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(err, floor);
  return err;
}

Segment apply_rule(const ComplexIntegrand& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<Complex, 21> fv;
  fv[10] = f(centre);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(centre - dx);
    fv[20 - j] = f(centre + dx);
  }
  Complex kron = fv[10] * kWgk[10];
  Complex gauss{};
  double abs_re = std::abs(fv[10].real()) * kWgk[10];
  double abs_im = std::abs(fv[10].imag()) * kWgk[10];
  for (std::size_t j = 0; j < 10; ++j) {
    const Complex pair = fv[j] + fv[20 - j];
    kron += kWgk[j] * pair;
    abs_re += kWgk[j] * (std::abs(fv[j].real()) + std::abs(fv[20 - j].real()));
    abs_im += kWgk[j] * (std::abs(fv[j].imag()) + std::abs(fv[20 - j].imag()));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const Complex mean = 0.5 * kron;
  double asc_re = kWgk[10] * std::abs(fv[10].real() - mean.real());
  double asc_im = kWgk[10] * std::abs(fv[10].imag() - mean.imag());
  for (std::size_t j = 0; j < 10; ++j) {
    asc_re += kWgk[j] * (std::abs(fv[j].real() - mean.real()) +
                         std::abs(fv[20 - j].real() - mean.real()));
    asc_im += kWgk[j] * (std::abs(fv[j].imag() - mean.imag()) +
                         std::abs(fv[20 - j].imag() - mean.imag()));
  }
  const double scale = std::abs(half);
  const Complex k = kron * half;
  const Complex g = gauss * half;
  const double err_re =
      component_error(k.real(), g.real(), abs_re * scale, asc_re * scale);
  const double err_im =
      component_error(k.imag(), g.imag(), abs_im * scale, asc_im * scale);
  const double err = std::hypot(err_re, err_im);
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || !std::isfinite(err)) {
    throw Error(ErrorCode::domain, "integrand is not finite on [" + std::to_string(lo) + ", " +
                                       std::to_string(hi) + "]");
  }
  return Segment{lo, hi, k, err};
}

bool is_finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

QuadratureResult<Complex> adaptive(const ComplexIntegrand& f, double lo, double hi,
                                   const QuadratureConfig& cfg,
                                   std::span<const double> breakpoints) {
  cfg.check();
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::domain, "integrate_finite: requires finite lo <= hi");
  }
  QuadratureResult<Complex> out;
  if (lo == hi) return out;

  std::vector<double> edges{lo};
  std::vector<double> inner(breakpoints.begin(), breakpoints.end());
  std::sort(inner.begin(), inner.end());
  for (double b : inner) {
    if (b > edges.back() && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);

  auto by_error = [](const Segment& a, const Segment& b) { return a.error < b.error; };
  std::priority_queue<Segment, std::vector<Segment>, decltype(by_error)> queue(by_error);
  std::vector<Segment> frozen;
  Complex total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = apply_rule(f, edges[i], edges[i + 1]);
    out.evaluations += 21;
    total += s.value;
    total_err += s.error;
    queue.push(s);
  }
  std::size_t count = queue.size();

  auto done = [&] {
    return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  };
  while (!done() && !queue.empty()) {
    if (count >= cfg.max_subdivisions) {
      out.converged = false;
      break;
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 100.0 * kEps * std::max(std::abs(mid), 1e-300)) {
      frozen.push_back(worst);
      continue;
    }
    Segment left = apply_rule(f, worst.lo, mid);
    Segment right = apply_rule(f, mid, worst.hi);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  if (!done()) out.converged = false;

  // Fixed summation order keeps results independent of heap internals.
  while (!queue.empty()) {
    frozen.push_back(queue.top());
    queue.pop();
  }
  std::sort(frozen.begin(), frozen.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  Complex sum{};
  double err = 0.0;
  for (const Segment& s : frozen) {
    sum += s.value;
    err += s.error;
  }
  if (!is_finite(sum)) {
    throw Error(ErrorCode::domain, "integrand produced a non-finite value");
  }
  out.value = sum;
  out.error_estimate = err;
  out.intervals = frozen.size();
  return out;
}

QuadratureResult<double> to_real(const QuadratureResult<Complex>& r) {
  return QuadratureResult<double>{r.value.real(), r.error_estimate, r.evaluations, r.intervals,
                                  r.converged};
}

ComplexIntegrand lift(const RealIntegrand& f) {
  return [&f](double x) { return Complex(f(x), 0.0); };
}

}  // namespace

void QuadratureConfig::check() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::domain, "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) throw Error(ErrorCode::domain, "max_subdivisions must be >= 1");
}

QuadratureResult<Complex> integrate_finite(const ComplexIntegrand& f, double lo, double hi,
                                           const QuadratureConfig& cfg,
                                           std::span<const double> breakpoints) {
  return adaptive(f, lo, hi, cfg, breakpoints);
}

QuadratureResult<double> integrate_finite(const RealIntegrand& f, double lo, double hi,
                                          const QuadratureConfig& cfg,
                                          std::span<const double> breakpoints) {
  return to_real(adaptive(lift(f), lo, hi, cfg, breakpoints));
}

QuadratureResult<Complex> integrate_thermal(const ComplexIntegrand& f, Temperature temp,
                                            const QuadratureConfig& cfg,
                                            const ThermalOptions& opts) {
  cfg.check();
  if (!(temp.value > 0.0) || !std::isfinite(temp.value)) {
    throw Error(ErrorCode::domain, "integrate_thermal: requires T > 0");
  }
  const double t = temp.value;
  const bool derivative = opts.weight == ThermalWeight::occupation_temp_derivative;
  // Weight in reduced units; the d/dT weight carries one extra power of x
  // and a factor 1/T.
  auto weight = [derivative, t](double x) {
    return derivative ? bose_temp_derivative_reduced(x) / t : bose_occupation_reduced(x);
  };
  const int power = std::max(0, opts.growth_power) + (derivative ? 1 : 0);
  auto poly = [power](double x) { return 1.0 + std::pow(x, power); };

  // Majorant M with |f(T x)| <= M (1 + x^p) on the sampled range.
  double majorant = 0.0;
  std::size_t evaluations = 0;
  for (double x = 1.0 / 64.0; x <= 64.0; x *= 2.0) {
    const double v = std::abs(f(t * x));
    ++evaluations;
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::growth_bound_exceeded,
                  "integrate_thermal: integrand not finite at x = " + std::to_string(x));
    }
    majorant = std::max(majorant, v / poly(x));
  }

  constexpr double kMaxReduced = 700.0;
  double cutoff = 40.0;
  if (majorant > 0.0) {
    // Tail of M (1 + x^p) e^{-x} beyond X is below 2 M (1 + X^p) e^{-X} for X > 2p.
    const double target = 0.01 * std::min(cfg.abs_tol / t, cfg.rel_tol * majorant);
    cutoff = std::max(2.0 * power + 10.0, 10.0);
    while (cutoff < kMaxReduced && 2.0 * majorant * poly(cutoff) * std::exp(-cutoff) > target) {
      cutoff += 1.0;
    }
    for (double x = cutoff; x <= kMaxReduced; x *= 2.0) {
      const double v = std::abs(f(t * x));
      ++evaluations;
      if (!std::isfinite(v) || v > 1e3 * majorant * poly(x)) {
        throw Error(ErrorCode::growth_bound_exceeded,
                    "integrate_thermal: integrand grows faster than x^" + std::to_string(power) +
                        " (sampled at x = " + std::to_string(x) + ")");
      }
    }
  }

  std::vector<double> edges;
  for (double x = 1.0; x < cutoff; x *= 4.0) edges.push_back(x);
  for (double b : opts.breakpoints) {
    const double x = std::abs(b) / t;
    if (x > 0.0 && x < cutoff) edges.push_back(x);
  }
  ComplexIntegrand reduced = [&](double x) { return t * f(t * x) * weight(x); };
  auto result = adaptive(reduced, 0.0, cutoff, cfg, edges);
  result.evaluations += evaluations;
  return result;
}

QuadratureResult<double> integrate_thermal(const RealIntegrand& f, Temperature temp,
                                           const QuadratureConfig& cfg,
                                           const ThermalOptions& opts) {
  return to_real(integrate_thermal(lift(f), temp, cfg, opts));
}

QuadratureResult<Complex> integrate_semi_infinite(const ComplexIntegrand& f, double scale,
                                                  const QuadratureConfig& cfg) {
  if (!(scale > 0.0)) throw Error(ErrorCode::domain, "integrate_semi_infinite: scale must be > 0");
  ComplexIntegrand mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    return f(scale * u / one_minus) * (scale / (one_minus * one_minus));
  };
  constexpr std::array<double, 4> kEdges = {0.1, 0.5, 0.9, 0.99};
  return adaptive(mapped, 0.0, 1.0, cfg, kEdges);
}

QuadratureResult<double> integrate_semi_infinite(const RealIntegrand& f, double scale,
                                                 const QuadratureConfig& cfg) {
  return to_real(integrate_semi_infinite(lift(f), scale, cfg));
}

ExtrapolationResult extrapolate_to_zero(std::span<const double> h, std::span<const double> y) {
  if (h.size() != y.size() || h.empty()) {
    throw Error(ErrorCode::domain, "extrapolate_to_zero: need matching, non-empty samples");
  }
  const std::size_t n = h.size();
  std::vector<double> p(y.begin(), y.end());
  // diagonal[k] = extrapolant through the first k+1 samples
  std::vector<double> diagonal{p[0]};
  std::vector<double> tableau = p;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double hi = h[i];
      const double hj = h[i + level];
      tableau[i] = (hi * tableau[i + 1] - hj * tableau[i]) / (hi - hj);
    }
    diagonal.push_back(tableau[0]);
  }
  ExtrapolationResult out;
  out.value = diagonal.back();
  if (n == 1) return out;
  out.error_estimate = std::abs(diagonal[n - 1] - diagonal[n - 2]);
  const double first_step = std::abs(diagonal[1] - diagonal[0]);
  const double noise = 1e-12 * std::max(std::abs(out.value), 1e-300);
  out.stable = std::isfinite(out.value) &&
               (out.error_estimate <= first_step || out.error_estimate <= noise);
  return out;
}

UniformGrid UniformGrid::linspace(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw Error(ErrorCode::domain, "linspace: need hi > lo, count >= 2");
  return UniformGrid{lo, (hi - lo) / static_cast<double>(count - 1), count};
}

double hilbert_transform_pv(std::span<const double> samples, const UniformGrid& grid,
                            std::size_t index) {
  constexpr std::size_t kMinPoints = 64;
  if (samples.size() < kMinPoints || grid.count != samples.size()) {
    throw Error(ErrorCode::grid_too_coarse,
                "hilbert_transform_pv: need at least 64 uniformly spaced samples");
  }
  if (index == 0 || index + 1 >= samples.size()) {
    throw Error(ErrorCode::domain, "hilbert_transform_pv: index must be interior to the window");
  }
  const double w = grid.at(index);
  const double g0 = samples[index];
  const double slope = (samples[index + 1] - samples[index - 1]) / (2.0 * grid.step);
  const std::size_t n = samples.size();
  // Regular part: trapezoid on (g(w') - g(w)) / (w' - w); its value at w' = w is g'(w).
  auto regular = [&](std::size_t k) {
    if (k == index) return slope;
    return (samples[k] - g0) / (grid.at(k) - w);
  };
  double sum = 0.5 * (regular(0) + regular(n - 1));
  for (std::size_t k = 1; k + 1 < n; ++k) sum += regular(k);
  sum *= grid.step;
  const double ends = g0 * std::log((grid.stop() - w) / (w - grid.start));
  return (sum + ends) / pi;
}

}  // namespace mirrordrag
