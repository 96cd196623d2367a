#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/float128.hpp>

#include "stablehcm/errors.hpp"

namespace stablehcm {

using float128 = boost::multiprecision::float128;

// ---------------------------------------------------------------------------
// quadrature on (0, inf)
// ---------------------------------------------------------------------------

struct QuadConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;  // honest underflow floor, not a real tolerance
  int max_levels = 15;
  std::optional<double> peak_hint;  // location of the integrand maximum, if known

  void validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("QuadConfig: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw DomainError("QuadConfig: abs_tol must be >= 0");
    if (max_levels < 1) throw DomainError("QuadConfig: max_levels must be >= 1");
    if (peak_hint && !(*peak_hint > 0.0)) throw DomainError("QuadConfig: peak_hint must be > 0");
  }
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double err_estimate = 0.0;  // absolute, floored at O(eps * l1_norm)
  long evaluations = 0;
  double l1_norm = 0.0;  // integral of |f|; err/l1 shows how much cancellation occurred
};

namespace detail {

template <class Real>
Real real_eps() {
  return std::numeric_limits<Real>::epsilon();
}

template <class Real>
boost::math::quadrature::tanh_sinh<Real>& ts_engine(int refinements) {
  thread_local std::map<int, std::unique_ptr<boost::math::quadrature::tanh_sinh<Real>>> cache;
  auto& slot = cache[refinements];
  if (!slot) slot = std::make_unique<boost::math::quadrature::tanh_sinh<Real>>(refinements);
  return *slot;
}

template <class Real>
struct PassResult {
  Real value{0};
  Real err{0};
  Real l1{0};
};

// One tanh-sinh pass over (0, upper) for a real-valued integrand. The backend
// runs at a tolerance well below the contract one so its a-posteriori estimate
// clears the contract check with margin.
template <class Real, class F>
PassResult<Real> ts_pass(F&& f, Real upper, Real tol, int refinements, long& evals) {
  auto guarded = [&](Real y) -> Real {
    ++evals;
    Real v = f(y);
    if (!(boost::math::isfinite)(v)) throw NonFiniteSample("integrand returned a non-finite value");
    return v;
  };
  PassResult<Real> out;
  std::size_t levels = 0;
  Real ts_tol = (std::max)(tol / 30, 4 * real_eps<Real>());
  try {
    out.value =
        ts_engine<Real>(refinements).integrate(guarded, Real(0), upper, ts_tol, &out.err, &out.l1, &levels);
  } catch (const NumericError&) {
    throw;
  } catch (const std::exception& e) {
    throw NonConvergence(std::string("quadrature backend: ") + e.what());
  }
  return out;
}

// Tail truncation: the integrands handled here decay at least like e^{-eps*y}
// past a finite point, so double the cutoff until |f| is below the floor.
template <class Real, class AbsF>
Real pick_upper(AbsF&& absf, Real hint, Real abs_tol) {
  Real scale = 0;
  for (Real m : {Real(0.25), Real(1), Real(4)}) {
    Real v = absf(hint * m);
    if ((boost::math::isfinite)(v)) scale = (std::max)(scale, v);
  }
  Real upper = (std::max)(Real(48), 8 * hint);
  Real floor_v = (std::max)(Real(abs_tol), scale * real_eps<Real>() / 64);
  for (int i = 0; i < 60; ++i) {
    Real v = absf(upper);
    if (!((boost::math::isfinite)(v)) || v * upper > floor_v)
      upper *= 2;
    else
      break;
  }
  return upper;
}

template <class Real>
struct ComplexQuad {
  Real re{0}, im{0};
  Real err{0};  // combined absolute estimate incl. rounding floor
  Real l1{0};
  long evaluations = 0;
  Real upper{0};

  bool meets(Real rel_tol, Real abs_tol) const {
    using std::sqrt;
    Real mag = sqrt(re * re + im * im);
    return err <= (std::max)(abs_tol, rel_tol * mag);
  }
};

// Complex integrand as two independent adaptive passes; the small component
// keeps its own error control instead of inheriting the big one's panels.
template <class Real, class FRe, class FIm, class FAbs>
ComplexQuad<Real> integrate_complex(FRe&& fre, FIm&& fim, FAbs&& fabs_, Real rel_tol, Real abs_tol,
                                    int max_levels, Real hint) {
  using std::sqrt;
  ComplexQuad<Real> out;
  int refinements = std::clamp(max_levels, 1, 18);
  // substitution y = hint * u maps the expected maximum to u ~ 1
  Real upper_y = pick_upper(fabs_, hint, abs_tol);
  Real upper_u = upper_y / hint;
  out.upper = upper_y;
  auto re_u = [&](Real u) { return hint * fre(hint * u); };
  auto im_u = [&](Real u) { return hint * fim(hint * u); };
  auto p1 = ts_pass<Real>(re_u, upper_u, rel_tol, refinements, out.evaluations);
  auto p2 = ts_pass<Real>(im_u, upper_u, rel_tol, refinements, out.evaluations);
  out.re = p1.value;
  out.im = p2.value;
  out.l1 = p1.l1 + p2.l1;
  Real est = sqrt(p1.err * p1.err + p2.err * p2.err);
  // the DE estimate cannot see the rounding floor of a cancellation-heavy sum
  out.err = (std::max)(est, 4 * real_eps<Real>() * out.l1);
  return out;
}

}  // namespace detail

/// Adaptive integration of f over (0, inf). f may return double or
/// std::complex<double>; the integrand must decay (at least exponentially
/// beyond some point) and be finite on (0, inf).
template <class F>
QuadResult integrate_half_line(F&& f, const QuadConfig& cfg = {}) {
  cfg.validate();
  using Ret = std::invoke_result_t<F&, double>;
  double hint = cfg.peak_hint.value_or(1.0);
  QuadResult qr;
  detail::ComplexQuad<double> c;
  if constexpr (std::is_convertible_v<Ret, double>) {
    long evals = 0;
    int refinements = std::clamp(cfg.max_levels, 1, 18);
    auto absf = [&](double y) { return std::fabs(f(y)); };
    double upper_y = detail::pick_upper<double>(absf, hint, cfg.abs_tol);
    auto f_u = [&](double u) { return hint * f(hint * u); };
    auto p = detail::ts_pass<double>(f_u, upper_y / hint, cfg.rel_tol, refinements, evals);
    c.re = p.value;
    c.err = (std::max)(p.err, 4 * detail::real_eps<double>() * p.l1);
    c.l1 = p.l1;
    c.evaluations = evals;
  } else {
    auto fre = [&](double y) { return std::real(f(y)); };
    auto fim = [&](double y) { return std::imag(f(y)); };
    auto fab = [&](double y) { return std::abs(f(y)); };
    c = detail::integrate_complex<double>(fre, fim, fab, cfg.rel_tol, cfg.abs_tol, cfg.max_levels, hint);
  }
  qr.value = {c.re, c.im};
  qr.err_estimate = c.err;
  qr.evaluations = (std::max)(c.evaluations, 1L);
  qr.l1_norm = c.l1;
  if (!c.meets(cfg.rel_tol, cfg.abs_tol))
    throw NonConvergence("integrate_half_line: estimate " + std::to_string(qr.err_estimate) +
                         " above tolerance at |I| = " + std::to_string(std::abs(qr.value)));
  return qr;
}

// ---------------------------------------------------------------------------
// finite differences and grids
// ---------------------------------------------------------------------------

/// Ladder of alternating forward differences: entry k is (-1)^k Delta_h^k f(x0),
/// k = 0..order, computed by repeated pairwise differencing (no binomial sums).
inline std::vector<double> alternating_differences(std::span<const double> samples, int order) {
  if (order < 0) throw DomainError("alternating_differences: order must be >= 0");
  if (samples.size() < static_cast<std::size_t>(order) + 1)
    throw DomainError("alternating_differences: need at least order+1 samples");
  std::vector<double> work(samples.begin(), samples.end());
  std::vector<double> out(order + 1);
  out[0] = work[0];
  for (int k = 1; k <= order; ++k) {
    for (std::size_t j = 0; j + k < work.size(); ++j) work[j] = work[j + 1] - work[j];
    out[k] = (k % 2 == 0) ? work[0] : -work[0];
  }
  return out;
}

/// Derivative of a sampled function on a strictly increasing grid. Interior
/// nodes use the three-point nonuniform central formula (exact for quadratics),
/// endpoints the matching one-sided formulas.
inline std::vector<double> central_derivative(std::span<const double> x, std::span<const double> y) {
  std::size_t n = x.size();
  if (n != y.size()) throw DomainError("central_derivative: size mismatch");
  if (n < 3) throw GridTooSmall("central_derivative: need at least 3 nodes");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1])) throw BadRange("central_derivative: grid not strictly increasing");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
    double g1 = x[n - 2] - x[n - 3], g2 = x[n - 1] - x[n - 2];
    d[n - 1] = g2 / (g1 * (g1 + g2)) * y[n - 3] - (g1 + g2) / (g1 * g2) * y[n - 2] +
               (g1 + 2 * g2) / (g2 * (g1 + g2)) * y[n - 1];
  }
  return d;
}

/// Geometric grid from t_min to t_max inclusive, constant ratio.
inline std::vector<double> log_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw BadRange("log_grid: need 0 < t_min < t_max");
  if (n < 2) throw BadRange("log_grid: need n >= 2");
  std::vector<double> g(n);
  double l0 = std::log(t_min), dl = (std::log(t_max) - l0) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = std::exp(l0 + dl * i);
  g.front() = t_min;
  g.back() = t_max;
  for (int i = 1; i < n; ++i)
    if (!(g[i] > g[i - 1])) throw BadRange("log_grid: nodes collapsed, n too large for the range");
  return g;
}

// ---------------------------------------------------------------------------
// log-scaled complex values
// ---------------------------------------------------------------------------

inline double normalize_phase_over_pi(double p) {
  p = std::fmod(p, 2.0);
  if (p > 1.0) p -= 2.0;
  if (p <= -1.0) p += 2.0;
  return p;
}

/// A complex value stored as (log-modulus, phase/pi) so e^{delta r}-scale
/// quantities never overflow.
struct LogComplex {
  double log_mod = -std::numeric_limits<double>::infinity();
  double phase_over_pi = 0.0;  // in (-1, 1]

  static LogComplex from_scaled(std::complex<double> scaled, double log_scale) {
    LogComplex lc;
    double m = std::abs(scaled);
    if (m == 0.0) return lc;
    lc.log_mod = std::log(m) + log_scale;
    lc.phase_over_pi = normalize_phase_over_pi(std::arg(scaled) / M_PI);
    return lc;
  }
  static LogComplex from_complex(std::complex<double> v) { return from_scaled(v, 0.0); }

  std::complex<double> to_complex() const {
    if (log_mod > 700.0)
      throw OverflowRisk("LogComplex: log-modulus " + std::to_string(log_mod) +
                         " too large for a plain complex");
    double m = std::exp(log_mod);
    return {m * std::cos(M_PI * phase_over_pi), m * std::sin(M_PI * phase_over_pi)};
  }
  double modulus() const {
    if (log_mod > 700.0) throw OverflowRisk("LogComplex: modulus overflows double");
    return std::exp(log_mod);
  }
  LogComplex conj() const {
    LogComplex lc = *this;
    lc.phase_over_pi = normalize_phase_over_pi(-phase_over_pi);
    return lc;
  }
};

}  // namespace stablehcm
