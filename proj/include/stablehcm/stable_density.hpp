#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "stablehcm/numerics.hpp"

namespace stablehcm {

/// Strictly stable law on the positive axis: index alpha in (0,1) and
/// positivity/asymmetry parameter rho in (0,1]. rho = 1 is the one-sided case.
struct StableParams {
  double alpha;
  double rho = 1.0;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("StableParams: alpha must be in (0,1)");
    if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("StableParams: rho must be in (0,1]");
  }
};

enum class DensityMethod { integral, series, closed_form_levy, auto_select };

using DensityFn = std::function<double(double)>;

namespace detail {

constexpr double kSeriesGuard = 1e12;  // max|term| / |sum| beyond which the sum is meaningless

// Large-x series: g(x) = (1/pi) sum_{n>=1} (-1)^{n+1} sin(n pi rho alpha)
//                         Gamma(n alpha + 1)/n! x^{-n alpha - 1}.
// Terms are handled in log magnitude; guard ratio reported to the caller.
struct SeriesEval {
  double value = 0.0;
  double guard_ratio = 0.0;  // max|term| / |sum|
  int terms = 0;
};

inline SeriesEval density_series_core(double alpha, double rho, double x, double term_tol = 1e-16) {
  SeriesEval out;
  const double lx = std::log(x);
  double sum = 0.0, max_abs_term = 0.0;
  int quiet = 0;
  for (int n = 1; n <= 4000; ++n) {
    double s = std::sin(M_PI * std::fmod(n * rho * alpha, 2.0));
    double lmag = std::lgamma(n * alpha + 1.0) - std::lgamma(n + 1.0) - (n * alpha + 1.0) * lx;
    double term = 0.0;
    if (s != 0.0) {
      term = ((n % 2 == 1) ? 1.0 : -1.0) * s / M_PI * std::exp(lmag);
      if (!std::isfinite(term)) return {std::numeric_limits<double>::quiet_NaN(), 1e308, n};
    }
    sum += term;
    max_abs_term = std::max(max_abs_term, std::fabs(term));
    out.terms = n;
    if (n > 3 && std::fabs(term) <= term_tol * std::max(std::fabs(sum), max_abs_term * 1e-13)) {
      if (++quiet >= 5) break;
    } else {
      quiet = 0;
    }
  }
  out.value = sum;
  out.guard_ratio = (sum != 0.0) ? max_abs_term / std::fabs(sum) : 1e308;
  return out;
}

}  // namespace detail

/// Convergent series evaluation of g_{alpha,rho}(x). Accurate for x^{-alpha}
/// small (large x); throws CancellationOverflow once max-term/result passes 1e12.
inline double density_series(const StableParams& p, double x) {
  p.validate();
  if (!(x > 0.0)) throw DomainError("density_series: x must be > 0");
  auto s = detail::density_series_core(p.alpha, p.rho, x);
  if (!std::isfinite(s.value) || s.guard_ratio > detail::kSeriesGuard)
    throw CancellationOverflow("density_series: cancellation ratio " + std::to_string(s.guard_ratio) +
                               " at x = " + std::to_string(x));
  return s.value;
}

namespace detail {

// Zolotarev's integral, complex combination taken exactly as written:
// g(x) = (2 i pi)^{-1} int_0^inf [e^{-e^{-i pi rho a} u} - e^{-e^{+i pi rho a} u}] x^{-1} e^{-y} dy,
// u = y^alpha x^{-alpha}.
inline QuadResult density_integral_core(double alpha, double rho, double x, QuadConfig cfg) {
  const double cphi = std::cos(M_PI * rho * alpha);
  const double sphi = std::sin(M_PI * rho * alpha);
  const double xa = std::pow(x, -alpha);
  const std::complex<double> pref = 1.0 / (std::complex<double>(0.0, 2.0 * M_PI) * x);
  auto f = [&](double y) -> std::complex<double> {
    double u = std::pow(y, alpha) * xa;
    std::complex<double> e1 = std::exp(-std::complex<double>(cphi * u, -sphi * u));
    std::complex<double> e2 = std::exp(-std::complex<double>(cphi * u, +sphi * u));
    return (e1 - e2) * (std::exp(-y) * pref);
  };
  if (!cfg.peak_hint) {
    if (cphi < 0.0) {
      // e^{|c| u - y} grows before the e^{-y} cutoff; peak of the exponent
      double C = -cphi * xa;
      cfg.peak_hint = std::pow(alpha * C, 1.0 / (1.0 - alpha));
    } else {
      cfg.peak_hint = std::min(1.0, x);
    }
  }
  return integrate_half_line(f, cfg);
}

}  // namespace detail

/// g_{alpha,rho}(x) for x > 0. auto_select prefers the series wherever its
/// cancellation guard says the digits are trustworthy, else the integral.
inline double density(const StableParams& p, double x, DensityMethod method = DensityMethod::auto_select,
                      const QuadConfig& cfg = {}) {
  p.validate();
  if (!(x > 0.0)) throw DomainError("density: x must be > 0");
  switch (method) {
    case DensityMethod::series:
      return density_series(p, x);
    case DensityMethod::closed_form_levy: {
      if (std::fabs(p.alpha - 0.5) > 1e-14 || p.rho != 1.0)
        throw DomainError("closed_form_levy is only the (alpha=1/2, rho=1) law");
      // Laplace transform e^{-sqrt(lambda)}; validated against the integral in the test suite
      return 0.5 / std::sqrt(M_PI) * std::pow(x, -1.5) * std::exp(-0.25 / x);
    }
    case DensityMethod::integral:
      return detail::density_integral_core(p.alpha, p.rho, x, cfg).value.real();
    case DensityMethod::auto_select: {
      auto s = detail::density_series_core(p.alpha, p.rho, x);
      if (std::isfinite(s.value) && s.guard_ratio < 3e5) return s.value;
      return detail::density_integral_core(p.alpha, p.rho, x, cfg).value.real();
    }
  }
  throw DomainError("density: unknown method");
}

/// Density of the product XY of independent positive variables:
/// int f(y) g(x/y) y^{-1} dy.
inline double mult_convolution(const DensityFn& f, const DensityFn& g, double x, QuadConfig cfg = {}) {
  if (!(x > 0.0)) throw DomainError("mult_convolution: x must be > 0");
  auto integrand = [&](double y) { return f(y) * g(x / y) / y; };
  if (!cfg.peak_hint) cfg.peak_hint = std::max(std::sqrt(x), 1e-3);
  return integrate_half_line(integrand, cfg).value.real();
}

/// Density of X^p when X has density f: |1/p| x^{1/p-1} f(x^{1/p}).
inline double pushforward_power(const DensityFn& f, double p, double x) {
  if (p == 0.0) throw DomainError("pushforward_power: p must be nonzero");
  if (!(x > 0.0)) throw DomainError("pushforward_power: x must be > 0");
  double ip = 1.0 / p;
  return std::fabs(ip) * std::pow(x, ip - 1.0) * f(std::pow(x, ip));
}

/// x^{-1-alpha} g_{alpha,rho}(1/x); decreasing on (0,inf) when
/// rho <= min(1, 1/(2 alpha)).
inline double tilde_density(const StableParams& p, double x, DensityMethod method = DensityMethod::auto_select) {
  if (!(x > 0.0)) throw DomainError("tilde_density: x must be > 0");
  return std::pow(x, -1.0 - p.alpha) * density(p, 1.0 / x, method);
}

/// Subordination mixture with the e^{-sqrt(2 lambda)}-normalized 1/2-stable
/// subordinator (density e^{-1/(2t)} / sqrt(2 pi t^3)):
///   2a int_0^inf g_{2a,rho}(y) e^{-(1/2)(y/x)^{2a}} y^a / (sqrt(2 pi) x^{a+1}) dy,  a = alpha2/2.
/// Relative to g_{a,rho} this is an argument rescale by k = 2^{1/(2a)}:
/// mixture(x) = k^{-1} g_{a,rho}(x/k).
inline double subordination_mixture(double alpha2, double rho, double x, QuadConfig cfg = {}) {
  if (!(alpha2 > 0.0 && alpha2 < 1.0)) throw DomainError("subordination_mixture: need 2*alpha in (0,1)");
  if (!(x > 0.0)) throw DomainError("subordination_mixture: x must be > 0");
  StableParams inner{alpha2, rho};
  inner.validate();
  const double a = 0.5 * alpha2;
  auto integrand = [&](double y) {
    double w = std::exp(-0.5 * std::pow(y / x, alpha2)) * std::pow(y, a);
    return density(inner, y) * w;
  };
  if (!cfg.peak_hint) cfg.peak_hint = std::max(x, 0.5);
  double I = integrate_half_line(integrand, cfg).value.real();
  return 2.0 * a * I / (std::sqrt(2.0 * M_PI) * std::pow(x, a + 1.0));
}

}  // namespace stablehcm
