#pragma once

#include <cmath>
#include <complex>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablehcm/galpha.hpp"
#include "stablehcm/numerics.hpp"

namespace stablehcm {
namespace thorin {

/// Sampled angle function theta(t) on a log grid, with the constant
/// extensions theta = alpha below t_min and theta = 1/2 above t_max.
struct ThetaTable {
  double alpha = 0.0;
  std::vector<double> nodes;   // strictly increasing, geometric
  std::vector<double> values;  // theta_i in (0,1)

  double t_min() const { return nodes.front(); }
  double t_max() const { return nodes.back(); }
  int size() const { return static_cast<int>(nodes.size()); }
};

struct MonotonicityReport {
  enum class Verdict { increasing, decreasing, constant, neither };
  Verdict verdict = Verdict::neither;
  double worst_margin = 0.0;  // largest consecutive difference against the verdict
  double location = 0.0;      // node where it occurs
};

inline const char* to_string(MonotonicityReport::Verdict v) {
  switch (v) {
    case MonotonicityReport::Verdict::increasing: return "increasing";
    case MonotonicityReport::Verdict::decreasing: return "decreasing";
    case MonotonicityReport::Verdict::constant: return "constant";
    default: return "neither";
  }
}

/// Verdict from consecutive differences with margin 1e-9 * max|theta|.
inline MonotonicityReport monotonicity(const ThetaTable& table) {
  MonotonicityReport rep;
  double scale = 0.0;
  for (double v : table.values) scale = std::max(scale, std::fabs(v));
  const double margin = 1e-9 * scale;
  double worst_up = 0.0, worst_down = 0.0, total = 0.0;
  double loc_up = table.nodes.front(), loc_down = table.nodes.front();
  for (int i = 1; i < table.size(); ++i) {
    double d = table.values[i] - table.values[i - 1];
    total += d;
    if (-d > worst_up) {
      worst_up = -d;  // violation of "increasing"
      loc_up = table.nodes[i];
    }
    if (d > worst_down) {
      worst_down = d;  // violation of "decreasing"
      loc_down = table.nodes[i];
    }
  }
  if (worst_up <= margin && worst_down <= margin) {
    rep.verdict = MonotonicityReport::Verdict::constant;
    rep.worst_margin = std::max(worst_up, worst_down);
    rep.location = loc_up;
  } else if (worst_up <= margin) {
    rep.verdict = MonotonicityReport::Verdict::increasing;
    rep.worst_margin = worst_up;
    rep.location = loc_up;
  } else if (worst_down <= margin) {
    rep.verdict = MonotonicityReport::Verdict::decreasing;
    rep.worst_margin = worst_down;
    rep.location = loc_down;
  } else {
    rep.verdict = MonotonicityReport::Verdict::neither;
    rep.worst_margin = std::max(worst_up, worst_down);
    rep.location = (worst_up >= worst_down) ? loc_up : loc_down;
  }
  return rep;
}

/// Sample theta(t) = -arg(G_alpha(-t^+))/pi on a geometric grid.
/// Endpoint laws enforced: theta(t_min) near alpha, theta(t_max) near 1/2.
inline ThetaTable build_theta(double alpha, double t_min = 1e-4, double t_max = 1e4, int n = 2000) {
  galpha::validate_alpha(alpha);
  if (!(t_min > 0.0 && t_min < t_max)) throw BadRange("build_theta: need 0 < t_min < t_max");
  if (n < 16) throw GridTooSmall("build_theta: need n >= 16 nodes");
  ThetaTable table;
  table.alpha = alpha;
  table.nodes = log_grid(t_min, t_max, n);
  table.values.reserve(n);
  for (double t : table.nodes) {
    double th = galpha::theta_at(alpha, t).theta;
    if (!(th > 0.0 && th < 1.0))
      throw NumericError("build_theta: theta outside (0,1) at t = " + std::to_string(t));
    table.values.push_back(th);
  }
  if (std::fabs(table.values.back() - 0.5) > 1e-3)
    throw EndpointMismatch("build_theta: theta(t_max) = " + std::to_string(table.values.back()) +
                           " not within 1e-3 of 1/2; increase t_max");
  if (std::fabs(table.values.front() - alpha) > 2e-2)
    throw EndpointMismatch("build_theta: theta(t_min) = " + std::to_string(table.values.front()) +
                           " not within 2e-2 of alpha; decrease t_min");
  return table;
}

namespace detail {

// One panel of int theta(t)/(c+t) dt with theta linear on [t0,t1]:
//   s*(t1-t0) + (th0 - s*(t0+c)) * log((c+t1)/(c+t0)),  s = (th1-th0)/(t1-t0).
// The s*(t1-t0) part cancels in the kernel difference, so only the log term
// matters for [1/(z+t) - 1/(1+t)].
template <class C>
C panel_log_part(C c, double t0, double t1, double th0, double th1) {
  double s = (th1 - th0) / (t1 - t0);
  C coef = C(th0) - C(s) * (C(t0) + c);
  return coef * log((c + C(t1)) / (c + C(t0)));
}

// exponent(z) = int_0^inf [1/(z+t) - 1/(1+t)] theta(t) dt with the table's
// piecewise-linear interior and exact constant tails.
inline std::complex<double> l_exponent(const ThetaTable& tb, std::complex<double> z) {
  using C = std::complex<double>;
  const double t0 = tb.t_min(), tN = tb.t_max();
  C e(0.0, 0.0);
  // lower tail, theta = alpha on (0, t0]
  e += tb.alpha * (std::log((z + t0) / z) - std::log1p(t0));
  // upper tail, theta = 1/2 on [tN, inf)
  e += -0.5 * std::log((z + tN) / (1.0 + tN));
  for (int i = 0; i + 1 < tb.size(); ++i) {
    double a = tb.nodes[i], b = tb.nodes[i + 1];
    double ya = tb.values[i], yb = tb.values[i + 1];
    e += panel_log_part<C>(z, a, b, ya, yb) - panel_log_part<C>(C(1.0), a, b, ya, yb);
  }
  return e;
}

// real positive z: same sum in real arithmetic (used heavily by the CM/HCM checks)
inline double l_exponent_pos(const ThetaTable& tb, double x) {
  const double t0 = tb.t_min(), tN = tb.t_max();
  double e = tb.alpha * (std::log1p(t0 / x) - std::log1p(t0));
  e += -0.5 * (std::log(x + tN) - std::log1p(tN));
  for (int i = 0; i + 1 < tb.size(); ++i) {
    double a = tb.nodes[i], b = tb.nodes[i + 1];
    double s = (tb.values[i + 1] - tb.values[i]) / (b - a);
    double c1 = tb.values[i] - s * (a + x);
    double c2 = tb.values[i] - s * (a + 1.0);
    e += c1 * std::log((x + b) / (x + a)) - c2 * std::log((1.0 + b) / (1.0 + a));
  }
  return e;
}

}  // namespace detail

/// The Stieltjes-exponential factor
///   L(z) = exp( int_0^inf [1/(z+t) - 1/(1+t)] theta(t) dt ),
/// L(1) = 1 exactly. Piecewise-linear theta between nodes, closed-form
/// logarithmic tails, so every panel is exact given the interpolant.
inline std::complex<double> l_eval(const ThetaTable& table, galpha::SlitPoint p) {
  p.validate();
  return std::exp(detail::l_exponent(table, p.to_complex()));
}

inline double l_eval_pos(const ThetaTable& table, double x) {
  if (!(x > 0.0)) throw DomainError("l_eval_pos: x must be > 0");
  return std::exp(detail::l_exponent_pos(table, x));
}

/// Calibration constant of G = a e^{-delta z} L(z), fixed at z = 1 where
/// L(1) = 1: a = e^{delta} G(1).
inline double calibrate_a(double alpha, const ThetaTable& table) {
  double delta = galpha::constants(alpha).delta;
  double g1 = galpha::eval(alpha, {1.0, 0.0}).real();
  double a = std::exp(delta) * g1;
  if (!(a > 0.0)) throw NumericError("calibrate_a: nonpositive calibration constant");
  (void)table;
  return a;
}

inline std::complex<double> reconstruct(double alpha, const ThetaTable& table, double a,
                                        galpha::SlitPoint p) {
  std::complex<double> z = p.to_complex();
  double delta = galpha::constants(alpha).delta;
  return a * std::exp(-delta * z) * l_eval(table, p);
}

inline std::complex<double> reconstruct(double alpha, const ThetaTable& table, galpha::SlitPoint p) {
  return reconstruct(alpha, table, calibrate_a(alpha, table), p);
}

/// Positive-axis reconstruction in log form, for the large-x regime where
/// e^{-delta x} loses all its digits to the exponential.
inline double reconstruct_log_pos(double alpha, const ThetaTable& table, double a, double x) {
  double delta = galpha::constants(alpha).delta;
  return std::log(a) - delta * x + detail::l_exponent_pos(table, x);
}

/// theta'-form of the representation:
///   G(z) = c e^{-delta z} z^{-1/2} exp( -int_0^inf log(1+t/z) theta'(t) dt ),
/// theta' from nonuniform central differences of the table (d theta/d log t / t).
/// The exp factor tends to 1 as z -> inf, so the prefactor is pinned to the
/// large-z law: c = c_adopted. (The exact alpha = 1/2 case, theta' = 0,
/// confirms it; a Gamma(a+1) prefactor fails that case by a factor pi.)
/// Requires a nondecreasing table.
inline std::complex<double> theta_prime_form(double alpha, const ThetaTable& table, galpha::SlitPoint p) {
  p.validate();
  auto rep = monotonicity(table);
  if (rep.verdict != MonotonicityReport::Verdict::increasing &&
      rep.verdict != MonotonicityReport::Verdict::constant)
    throw NotMonotone("theta_prime_form: table is not nondecreasing (" +
                      std::string(to_string(rep.verdict)) + ")");
  const int n = table.size();
  std::vector<double> logt(n);
  for (int i = 0; i < n; ++i) logt[i] = std::log(table.nodes[i]);
  std::vector<double> dlog = central_derivative(logt, table.values);
  std::vector<double> tp(n);
  for (int i = 0; i < n; ++i) tp[i] = dlog[i] / table.nodes[i];

  std::complex<double> z = p.to_complex();
  std::complex<double> I(0.0, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    std::complex<double> fa = std::log(1.0 + table.nodes[i] / z) * tp[i];
    std::complex<double> fb = std::log(1.0 + table.nodes[i + 1] / z) * tp[i + 1];
    I += 0.5 * (fa + fb) * (table.nodes[i + 1] - table.nodes[i]);
  }
  auto k = galpha::constants(alpha);
  return k.c_adopted * std::exp(-k.delta * z) / std::sqrt(z) * std::exp(-I);
}

/// Total variation int theta'(t) dt: trapezoid over the table plus the
/// analytic tail below t_min, where theta(t) = alpha + C t^{1-alpha} so the
/// missing mass is exactly theta_0 - alpha. Equals 1/2 - alpha.
inline double theta_prime_total(const ThetaTable& table) {
  const int n = table.size();
  std::vector<double> logt(n);
  for (int i = 0; i < n; ++i) logt[i] = std::log(table.nodes[i]);
  std::vector<double> dlog = central_derivative(logt, table.values);
  double I = table.values.front() - table.alpha;  // lower tail
  I += 0.5 - table.values.back();                 // upper tail (exponentially small)
  for (int i = 0; i + 1 < n; ++i) {
    double fa = dlog[i] / table.nodes[i], fb = dlog[i + 1] / table.nodes[i + 1];
    I += 0.5 * (fa + fb) * (table.nodes[i + 1] - table.nodes[i]);
  }
  return I;
}

/// Log-moment of theta': int log t theta'(t) dt, trapezoid over the table
/// plus the lower-tail term of the t^{1-alpha} approach law,
///   int_0^{t0} log t theta' dt = (theta_0 - alpha)(log t0 - 1/(1-alpha)).
inline double theta_prime_log_moment(const ThetaTable& table) {
  const int n = table.size();
  std::vector<double> logt(n);
  for (int i = 0; i < n; ++i) logt[i] = std::log(table.nodes[i]);
  std::vector<double> dlog = central_derivative(logt, table.values);
  double I = (table.values.front() - table.alpha) *
             (logt.front() - 1.0 / (1.0 - table.alpha));
  for (int i = 0; i + 1 < n; ++i) {
    double fa = logt[i] * dlog[i] / table.nodes[i], fb = logt[i + 1] * dlog[i + 1] / table.nodes[i + 1];
    I += 0.5 * (fa + fb) * (table.nodes[i + 1] - table.nodes[i]);
  }
  return I;
}

// ---------------------------------------------------------------------------
// serialization: CSV `t,theta` at 17 significant digits + JSON sidecar
// ---------------------------------------------------------------------------

inline void write_csv(const ThetaTable& table, std::ostream& os, int precision = 17) {
  os << "t,theta\n";
  char buf[80];
  for (int i = 0; i < table.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.*g,%.*g\n", precision, table.nodes[i], precision,
                  table.values[i]);
    os << buf;
  }
}

inline nlohmann::json sidecar_json(const ThetaTable& table, double a) {
  return nlohmann::json{{"alpha", table.alpha},
                        {"t_min", table.t_min()},
                        {"t_max", table.t_max()},
                        {"n", table.size()},
                        {"delta", galpha::constants(table.alpha).delta},
                        {"a", a}};
}

inline ThetaTable load_csv(std::istream& is, double alpha) {
  ThetaTable tb;
  tb.alpha = alpha;
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,theta", 0) != 0)
    throw BadRange("load_csv: missing t,theta header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double t, th;
    char comma;
    if (!(ls >> t >> comma >> th) || comma != ',') throw BadRange("load_csv: malformed row: " + line);
    tb.nodes.push_back(t);
    tb.values.push_back(th);
  }
  if (tb.size() < 2) throw GridTooSmall("load_csv: not enough rows");
  return tb;
}

}  // namespace thorin
}  // namespace stablehcm
