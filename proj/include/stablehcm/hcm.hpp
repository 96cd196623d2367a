#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stablehcm/numerics.hpp"
#include "stablehcm/stable_density.hpp"

namespace stablehcm {
namespace hcm {

using PosFn = std::function<double(double)>;

/// Discrete-measure instance of the HCM representation
///   H(x) = c x^{beta-1} exp( -a1 x - sum w log((x+t)/(1+t))
///                            -a2/x - sum w log((1/x+t)/(1+t)) ),
/// atoms (t_j >= 1, w_j > 0) for both measures.
struct HCMRepresentation {
  double c = 1.0;
  double beta = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;
  std::vector<std::pair<double, double>> mu1;  // (t_j, w_j)
  std::vector<std::pair<double, double>> mu2;

  void validate() const {
    if (!(c > 0.0)) throw DomainError("HCMRepresentation: c must be > 0");
    if (!(a1 >= 0.0) || !(a2 >= 0.0)) throw DomainError("HCMRepresentation: a1, a2 must be >= 0");
    for (auto& m : {mu1, mu2})
      for (auto& [t, w] : m)
        if (!(t >= 1.0) || !(w > 0.0))
          throw DomainError("HCMRepresentation: atoms need t >= 1, w > 0");
  }
};

inline double eval_representation(const HCMRepresentation& rep, double x) {
  if (!(x > 0.0)) throw DomainError("eval_representation: x must be > 0");
  double e = std::log(rep.c) + (rep.beta - 1.0) * std::log(x) - rep.a1 * x - rep.a2 / x;
  for (auto& [t, w] : rep.mu1) e -= w * std::log((x + t) / (1.0 + t));
  for (auto& [t, w] : rep.mu2) e -= w * std::log((1.0 / x + t) / (1.0 + t));
  return std::exp(e);
}

/// Result of a finite-difference complete-monotonicity scan. "consistent"
/// certifies no violation above tolerance at the tested points, never a proof.
struct CMReport {
  enum class Verdict { consistent, violated };
  struct Witness {
    double x0 = 0.0;
    double h = 0.0;
    int k = 0;
    std::optional<double> u;  // set by hcm_check
  };
  Verdict verdict = Verdict::consistent;
  double max_violation = 0.0;  // scaled by the local stencil magnitude
  Witness witness;
  int orders = 0;
  double tol = 0.0;
};

inline const char* to_string(CMReport::Verdict v) {
  return v == CMReport::Verdict::consistent ? "consistent" : "violated";
}

struct CMConfig {
  double domain_min = 1e-2;      // test on (domain_min, inf)
  std::vector<double> x0_grid;   // default: log grid from the domain
  int orders = 8;                // K; >8 loses too many digits to cancellation
  double tol = 1e-7;             // relative to max|f| over the stencil
  int m_min = 3, m_max = 10;     // h = x0 * 2^-m
};

/// Alternating finite differences of f at x0-grid points over an h-scan:
/// consistent iff (-1)^k Delta_h^k f >= -tol * local_scale for every tested
/// (x0, h, k <= K). No single h is reliable, hence the scan.
template <class F>
CMReport cm_check(F&& f, CMConfig cfg = {}) {
  if (cfg.orders < 1 || cfg.orders > 8) throw DomainError("cm_check: orders must be in [1,8]");
  if (cfg.x0_grid.empty())
    cfg.x0_grid = log_grid(cfg.domain_min * 1.02, std::max(50.0, cfg.domain_min * 200.0), 24);
  CMReport rep;
  rep.orders = cfg.orders;
  rep.tol = cfg.tol;
  bool witnessed = false;
  double witness_viol = 0.0;
  std::vector<double> samples(cfg.orders + 1);
  for (double x0 : cfg.x0_grid) {
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
      double h = x0 * std::ldexp(1.0, -m);
      double scale = 0.0;
      for (int j = 0; j <= cfg.orders; ++j) {
        double v = f(x0 + j * h);
        if (!std::isfinite(v)) throw NonFiniteSample("cm_check: non-finite sample at x = " +
                                                     std::to_string(x0 + j * h));
        samples[j] = v;
        scale = std::max(scale, std::fabs(v));
      }
      if (scale == 0.0) continue;
      auto ladder = alternating_differences(samples, cfg.orders);
      for (int k = 0; k <= cfg.orders; ++k) {
        double viol = -ladder[k] / scale;
        if (viol > rep.max_violation) rep.max_violation = viol;
        // witness: lowest violating order (the most direct certificate),
        // worst location within that order
        if (viol > cfg.tol) {
          bool better = !witnessed || k < rep.witness.k ||
                        (k == rep.witness.k && viol > witness_viol);
          if (better) {
            rep.witness = {x0, h, k, std::nullopt};
            witness_viol = viol;
            witnessed = true;
          }
        }
      }
    }
  }
  rep.verdict = (rep.max_violation > cfg.tol) ? CMReport::Verdict::violated
                                              : CMReport::Verdict::consistent;
  return rep;
}

struct HCMConfig {
  std::vector<double> u_set = {0.25, 0.5, 1.0, 2.0, 4.0};
  double w_min = 2.0 + 1e-4;
  double w_max = 50.0;
  int w_points = 32;
  int orders = 8;
  double tol = 1e-7;
  int m_min = 3, m_max = 10;
};

/// Hyperbolic complete monotonicity scan: for each u, phi_u(w) = H(uv)H(u/v)
/// with v = (w + sqrt(w^2-4))/2 >= 1 must be completely monotone on (2, inf).
/// (phi_u is symmetric under v -> 1/v, so the root choice is immaterial.)
template <class F>
CMReport hcm_check(F&& H, HCMConfig cfg = {}) {
  CMReport worst;
  worst.orders = cfg.orders;
  worst.tol = cfg.tol;
  for (double u : cfg.u_set) {
    auto phi = [&](double w) {
      double v = 0.5 * (w + std::sqrt((w - 2.0) * (w + 2.0)));
      return H(u * v) * H(u / v);
    };
    CMConfig cc;
    cc.orders = cfg.orders;
    cc.tol = cfg.tol;
    cc.m_min = cfg.m_min;
    cc.m_max = cfg.m_max;
    cc.x0_grid = log_grid(cfg.w_min, cfg.w_max, cfg.w_points);
    CMReport r = cm_check(phi, cc);
    if (r.max_violation > worst.max_violation) {
      worst.max_violation = r.max_violation;
      worst.witness = r.witness;
      worst.witness.u = u;
    }
  }
  worst.verdict = (worst.max_violation > cfg.tol) ? CMReport::Verdict::violated
                                                  : CMReport::Verdict::consistent;
  return worst;
}

// ---------------------------------------------------------------------------
// closure transforms
// ---------------------------------------------------------------------------

inline PosFn transform_invert(PosFn H) {
  return [H = std::move(H)](double x) { return H(1.0 / x); };
}

/// H(x^b); HCM is preserved only for b <= 1.
inline PosFn transform_power(PosFn H, double b) {
  if (!(b <= 1.0)) throw DomainError("transform_power: need b <= 1");
  if (b == 0.0) throw DomainError("transform_power: b must be nonzero");
  return [H = std::move(H), b](double x) { return H(std::pow(x, b)); };
}

inline PosFn transform_scalepow(PosFn H, double gamma) {
  return [H = std::move(H), gamma](double x) { return std::pow(x, gamma) * H(x); };
}

/// Density of the product of two independent positive variables.
inline DensityFn transform_product(DensityFn f, DensityFn g, QuadConfig cfg = {}) {
  return [f = std::move(f), g = std::move(g), cfg](double x) {
    return mult_convolution(f, g, x, cfg);
  };
}

// ---------------------------------------------------------------------------
// multiplicative semigroup membership
// ---------------------------------------------------------------------------

/// Factor alpha into n copies of alpha^{1/n} with every factor in [1/3, 1/2]:
/// possible exactly when alpha lies in (0, 1/4] U [1/3, 1/2] (the semigroup
/// generated by [1/3, 1/2]). Boundary comparisons carry 1e-12 relative slack
/// so that double(1/3) and 0.25 classify as members.
inline std::optional<std::vector<double>> semigroup_membership(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("semigroup_membership: alpha must be in (0,1)");
  const double slack = 1e-12;
  for (int n = 1; n <= 64; ++n) {
    double lo = alpha * std::pow(3.0, n);    // alpha >= 3^-n  <=>  lo >= 1
    double hi = alpha * std::ldexp(1.0, n);  // alpha <= 2^-n  <=>  hi <= 1
    if (lo >= 1.0 - slack && hi <= 1.0 + slack)
      return std::vector<double>(static_cast<std::size_t>(n), std::pow(alpha, 1.0 / n));
    if (hi > 1.0 + slack) return std::nullopt;  // hi only grows; no larger n can qualify
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

inline nlohmann::json report_json(const CMReport& rep) {
  nlohmann::json w{{"x0", rep.witness.x0}, {"h", rep.witness.h}, {"k", rep.witness.k}};
  if (rep.witness.u)
    w["u"] = *rep.witness.u;
  else
    w["u"] = nullptr;
  return nlohmann::json{{"verdict", to_string(rep.verdict)},
                        {"max_violation", rep.max_violation},
                        {"witness", w},
                        {"orders", rep.orders},
                        {"tol", rep.tol}};
}

}  // namespace hcm
}  // namespace stablehcm
