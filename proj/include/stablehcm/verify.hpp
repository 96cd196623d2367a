#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablehcm/galpha.hpp"
#include "stablehcm/hcm.hpp"
#include "stablehcm/stable_density.hpp"
#include "stablehcm/thorin.hpp"

namespace stablehcm {
namespace verify {

struct Check {
  std::string suite;
  std::string name;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double measured = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  std::string note;
};

struct Options {
  unsigned seed = 0;
  double rel_tol = 1e-10;  // evaluator tolerance (STABLE_HCM_TOL overrides via the CLI)
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "exact-half",      "asymptotics", "small-z",       "cut-laws",  "representation",
      "theta-monotone",  "hcm",         "subordination", "semigroup", "all"};
  return names;
}

namespace detail {

inline Check rel_check(std::string suite, std::string name, double alpha, double measured,
                       double expected, double tol, std::string note = "") {
  Check c{std::move(suite), std::move(name), alpha, measured, expected, tol, false, std::move(note)};
  double denom = std::max(std::fabs(expected), 1e-300);
  c.pass = std::isfinite(measured) && std::fabs(measured - expected) / denom <= tol;
  return c;
}

inline Check bound_check(std::string suite, std::string name, double alpha, double measured,
                         double bound, std::string note = "") {
  // pass iff measured <= bound
  Check c{std::move(suite), std::move(name), alpha, measured, 0.0, bound, false, std::move(note)};
  c.pass = std::isfinite(measured) && measured <= bound;
  return c;
}

inline Check abs_check(std::string suite, std::string name, double alpha, double measured,
                       double expected, double tol_abs, std::string note = "") {
  Check c{std::move(suite), std::move(name), alpha, measured, expected, tol_abs, false, std::move(note)};
  c.pass = std::isfinite(measured) && std::fabs(measured - expected) <= tol_abs;
  return c;
}

inline Check flag_check(std::string suite, std::string name, double alpha, bool pass,
                        std::string note = "") {
  Check c{std::move(suite), std::move(name), alpha, pass ? 1.0 : 0.0, 1.0, 0.0, pass, std::move(note)};
  return c;
}

}  // namespace detail

/// Acceptance/verification suites. Caches one theta table and calibration
/// constant per alpha so suites can share them.
class Runner {
 public:
  explicit Runner(Options opt = {}) : opt_(opt) {}

  const thorin::ThetaTable& table(double alpha) {
    auto it = tables_.find(alpha);
    if (it == tables_.end()) it = tables_.emplace(alpha, thorin::build_theta(alpha)).first;
    return it->second;
  }

  double a_of(double alpha) {
    auto it = a_.find(alpha);
    if (it == a_.end()) it = a_.emplace(alpha, thorin::calibrate_a(alpha, table(alpha))).first;
    return it->second;
  }

  /// Reconstruction-backed evaluator of G_alpha on the positive axis, the
  /// uniformly smooth large-x path used by the HCM and asymptotics suites.
  hcm::PosFn g_reconstructed(double alpha) {
    const thorin::ThetaTable& tb = table(alpha);
    double a = a_of(alpha);
    double delta = galpha::constants(alpha).delta;
    return [&tb, a, delta](double x) {
      return std::exp(std::log(a) - delta * x + thorin::detail::l_exponent_pos(tb, x));
    };
  }

  std::vector<Check> run(const std::string& suite, std::vector<double> alphas = {});

  Options options() const { return opt_; }

 private:
  void exact_half(std::vector<Check>& out);
  void small_z(std::vector<Check>& out, const std::vector<double>& alphas);
  void asymptotics(std::vector<Check>& out, const std::vector<double>& alphas);
  void cut_laws(std::vector<Check>& out, const std::vector<double>& alphas);
  void representation(std::vector<Check>& out, const std::vector<double>& alphas);
  void theta_monotone(std::vector<Check>& out, const std::vector<double>& alphas);
  void hcm_suite(std::vector<Check>& out);
  void subordination(std::vector<Check>& out);
  void semigroup(std::vector<Check>& out);

  Options opt_;
  std::map<double, thorin::ThetaTable> tables_;
  std::map<double, double> a_;
};

// ---------------------------------------------------------------------------

inline void Runner::exact_half(std::vector<Check>& out) {
  const std::string S = "exact-half";
  const double c = 0.5 / std::sqrt(M_PI);
  double worst_series = 0.0, worst_integral = 0.0;
  for (double x : log_grid(0.01, 100.0, 50)) {
    double closed = c * std::pow(x, -0.5) * std::exp(-0.25 * x);
    double vs = galpha::eval(0.5, {x, 0.0}, galpha::Method::series, 1e-10).real();
    double vi = galpha::eval(0.5, {x, 0.0}, galpha::Method::integral, 1e-10).real();
    worst_series = std::max(worst_series, std::fabs(vs - closed) / closed);
    worst_integral = std::max(worst_integral, std::fabs(vi - closed) / closed);
  }
  out.push_back(detail::bound_check(S, "series vs closed form, max rel err over 50 x in [0.01,100]",
                                    0.5, worst_series, 1e-9));
  out.push_back(detail::bound_check(S, "integral vs closed form, max rel err over 50 x in [0.01,100]",
                                    0.5, worst_integral, 1e-9));
  const thorin::ThetaTable& tb = table(0.5);
  double worst_theta = 0.0;
  for (double th : tb.values) worst_theta = std::max(worst_theta, std::fabs(th - 0.5));
  out.push_back(detail::bound_check(S, "theta(r) = 1/2 on the cut grid", 0.5, worst_theta, 1e-10));
}

inline void Runner::small_z(std::vector<Check>& out, const std::vector<double>& alphas) {
  const std::string S = "small-z";
  const double x = 1e-5;
  for (double a : alphas) {
    double measured = std::pow(x, a) * galpha::eval(a, {x, 0.0}, galpha::Method::series).real();
    double cand1 = galpha::small_z_constant(a);  // Gamma(a+1) sin(pi a)/pi
    double cand2 = std::tgamma(a + 1.0) * std::sin(2.0 * M_PI * a) / M_PI;
    std::string note = "candidates: sin(pi a) -> " + std::to_string(cand1) + ", sin(2 pi a) -> " +
                       std::to_string(cand2);
    out.push_back(detail::rel_check(S, "x^a G(x) at x=1e-5 vs Gamma(a+1)sin(pi a)/pi", a, measured,
                                    cand1, 1e-3, note));
    if (std::fabs(a - 0.5) > 1e-9) {
      bool refuted = !(std::fabs(measured - cand2) <= 0.10 * std::fabs(cand2));
      out.push_back(detail::flag_check(S, "sin(2 pi a) candidate off by more than 10%", a, refuted,
                                       note));
    }
  }
}

inline void Runner::asymptotics(std::vector<Check>& out, const std::vector<double>& alphas) {
  const std::string S = "asymptotics";
  for (double a : alphas) {
    auto k = galpha::constants(a);
    const thorin::ThetaTable& tb = table(a);
    double cal = a_of(a);
    // positive axis: G x^{1/2} e^{delta x} measured through the Stieltjes
    // reconstruction (the direct integral is cancellation-dead past x ~ 100)
    auto scaled = [&](double x) {
      return cal * std::sqrt(x) * std::exp(thorin::detail::l_exponent_pos(tb, x));
    };
    double m100 = scaled(100.0), m200 = scaled(200.0);
    std::string note = "c_paper = " + std::to_string(k.c_paper) + " (off by sqrt(2 pi)), c_adopted = " +
                       std::to_string(k.c_adopted);
    out.push_back(detail::rel_check(S, "G x^{1/2} e^{dx} at x=100 vs c_adopted", a, m100, k.c_adopted,
                                    0.02, note));
    out.push_back(detail::rel_check(S, "G x^{1/2} e^{dx} at x=200 vs c_adopted", a, m200, k.c_adopted,
                                    0.02));
    out.push_back(detail::rel_check(S, "positive-axis drift between x=100 and x=200", a, m200, m100,
                                    0.02));
    out.push_back(detail::flag_check(S, "c_paper (without sqrt(2 pi)) is refuted", a,
                                     std::fabs(m100 / k.c_paper - 1.0) > 0.5, note));
    // cut: r^{1/2} e^{-dr} |G(-r^+)| from the scaled boundary series
    auto cut_scaled = [&](double r) {
      LogComplex b = galpha::boundary(a, {r, galpha::Side::upper});
      return std::exp(0.5 * std::log(r) - k.delta * r + b.log_mod);
    };
    double b100 = cut_scaled(100.0), b200 = cut_scaled(200.0);
    out.push_back(detail::rel_check(S, "cut |G(-r^+)| r^{1/2} e^{-dr} at r=100 vs c_adopted", a, b100,
                                    k.c_adopted, 0.02));
    out.push_back(detail::rel_check(S, "cut |G(-r^+)| r^{1/2} e^{-dr} at r=200 vs c_adopted", a, b200,
                                    k.c_adopted, 0.02));
    out.push_back(detail::rel_check(S, "cut drift between r=100 and r=200", a, b200, b100, 0.02));
  }
}

inline void Runner::cut_laws(std::vector<Check>& out, const std::vector<double>& alphas) {
  const std::string S = "cut-laws";
  auto grid = log_grid(1e-3, 50.0, 200);
  for (double a : alphas) {
    double worst_im = -std::numeric_limits<double>::infinity();  // max Im over grid, must stay < 0
    double min_inc = std::numeric_limits<double>::infinity();    // min consecutive diff of -r^a Im
    double prev = 0.0;
    bool first = true;
    for (double r : grid) {
      auto b = galpha::boundary(a, {r, galpha::Side::upper});
      double im = std::sin(M_PI * b.phase_over_pi);  // sign of Im G; |G| factored out in law 1
      worst_im = std::max(worst_im, im * std::exp(std::min(b.log_mod, 700.0)));
      double s = -std::pow(r, a) * im * std::exp(b.log_mod);  // -r^a Im G
      if (!first) min_inc = std::min(min_inc, s - prev);
      prev = s;
      first = false;
    }
    out.push_back(detail::flag_check(S, "Im G(-r^+) < 0 on 200 log r in [1e-3, 50]", a, worst_im < 0.0,
                                     "max Im = " + std::to_string(worst_im)));
    out.push_back(detail::flag_check(S, "-r^a Im G(-r^+) strictly increasing", a, min_inc > 0.0,
                                     "min consecutive increment = " + std::to_string(min_inc)));
  }
  for (double a : {1.0 / 3.0, 0.4, 0.45}) {
    double max_dec = -std::numeric_limits<double>::infinity();
    double prev = 0.0;
    bool first = true;
    for (double r : grid) {
      auto b = galpha::boundary(a, {r, galpha::Side::upper});
      double s = std::pow(r, a) * std::cos(M_PI * b.phase_over_pi) * std::exp(b.log_mod);
      if (!first) max_dec = std::max(max_dec, s - prev);
      prev = s;
      first = false;
    }
    out.push_back(detail::flag_check(S, "r^a Re G(-r^+) strictly decreasing", a, max_dec < 0.0,
                                     "max consecutive increment = " + std::to_string(max_dec)));
  }
  {
    // both sides reduce to the same half-line integral; the density side
    // carries twice the prefactor, so the identity holds with a factor 1/2
    const double a = 0.4, rho = 1.0 / a - 2.0;  // 0.5
    double worst = 0.0, worst_printed = 1e308;
    for (double r : {0.5, 1.0, 2.0}) {
      double re = galpha::boundary(a, {r, galpha::Side::upper}).to_complex().real();
      double rhs = std::pow(r, -1.0 / a) *
                   density(StableParams{a, rho}, std::pow(r, -(1.0 - a) / a));
      worst = std::max(worst, std::fabs(re - 0.5 * rhs) / std::fabs(0.5 * rhs));
      worst_printed = std::min(worst_printed, std::fabs(re - rhs) / std::fabs(rhs));
    }
    out.push_back(detail::bound_check(
        S, "Re G(-r^+) = (1/2) r^{-1/a} g_{a,1/a-2}(r^{-(1-a)/a}), r in {0.5,1,2}", a, worst, 1e-6,
        "the factor-1 variant misses by the measured ratio 2"));
    out.push_back(detail::flag_check(S, "printed factor-1 cross-identity refuted", a,
                                     worst_printed > 0.4,
                                     "best agreement of the factor-1 form: " +
                                         std::to_string(worst_printed)));
  }
}

inline void Runner::representation(std::vector<Check>& out, const std::vector<double>& alphas) {
  const std::string S = "representation";
  for (double a : alphas) {
    const thorin::ThetaTable& tb = table(a);
    double cal = a_of(a);
    double worst = 0.0;
    for (double r : log_grid(0.1, 20.0, 8)) {
      for (double t : {0.0, 0.4, -0.4, 0.9, -0.9}) {
        std::complex<double> direct = galpha::eval(a, {r, t});
        std::complex<double> rec = thorin::reconstruct(a, tb, cal, {r, t});
        worst = std::max(worst, std::abs(direct - rec) / std::abs(direct));
      }
    }
    out.push_back(detail::bound_check(
        S, "max rel err of a e^{-dz} L(z) vs direct eval on the 40-point slit grid", a, worst, 1e-3));
  }
}

inline void Runner::theta_monotone(std::vector<Check>& out, const std::vector<double>& alphas) {
  const std::string S = "theta-monotone";
  using V = thorin::MonotonicityReport::Verdict;
  for (double a : alphas) {
    const thorin::ThetaTable& tb = table(a);
    out.push_back(detail::bound_check(S, "|theta(t_min) - alpha|", a,
                                      std::fabs(tb.values.front() - a), 2e-2));
    out.push_back(detail::bound_check(S, "|theta(t_max) - 1/2|", a,
                                      std::fabs(tb.values.back() - 0.5), 1e-3));
    auto rep = thorin::monotonicity(tb);
    V want = (std::fabs(a - 0.5) < 1e-12) ? V::constant : (a < 0.5 ? V::increasing : V::decreasing);
    out.push_back(detail::flag_check(S, std::string("verdict = ") + thorin::to_string(want), a,
                                     rep.verdict == want,
                                     std::string("got ") + thorin::to_string(rep.verdict) +
                                         ", worst margin " + std::to_string(rep.worst_margin)));
    double tv = thorin::theta_prime_total(tb);
    out.push_back(detail::abs_check(S, "total variation int theta' = 1/2 - alpha", a, tv, 0.5 - a,
                                    1e-3));
  }
  {
    // log-moment identity from equating the z -> 0 limits: the theta'-form's
    // prefactor is the large-z constant c_adopted (the exp factor -> 1 at
    // infinity), so exp(-int log t theta') = Gamma(a+1) sin(pi a)/(pi c_adopted).
    // The sin(pi a)/pi candidate assumes a Gamma(a+1) prefactor, which the
    // exact alpha = 1/2 case refutes by a factor pi; both are reported.
    const double a = 0.4;
    double lm = thorin::theta_prime_log_moment(table(a));
    double oracle = galpha::small_z_constant(a) / galpha::constants(a).c_adopted;
    double printed = std::sin(M_PI * a) / M_PI;
    std::string note = "candidates: K/c_adopted = " + std::to_string(oracle) +
                       ", sin(pi a)/pi = " + std::to_string(printed);
    out.push_back(detail::abs_check(S, "log-moment identity exp(-int log t theta') = K/c_adopted", a,
                                    std::exp(-lm), oracle, 1e-3, note));
    out.push_back(detail::flag_check(S, "sin(pi a)/pi candidate (Gamma(a+1) prefactor) refuted", a,
                                     std::fabs(std::exp(-lm) - printed) > 0.10 * printed, note));
  }
}

inline void Runner::hcm_suite(std::vector<Check>& out) {
  const std::string S = "hcm";
  using hcm::CMReport;
  // gamma kernel
  {
    auto rep = hcm::hcm_check([](double x) { return std::pow(x, 1.5) * std::exp(-x); });
    out.push_back(detail::flag_check(S, "gamma kernel x^{beta-1} e^{-x}, beta=2.5: consistent",
                                     std::numeric_limits<double>::quiet_NaN(),
                                     rep.verdict == CMReport::Verdict::consistent,
                                     "max violation " + std::to_string(rep.max_violation)));
  }
  // 50 randomized representations and their closure transforms
  {
    std::mt19937 rng(opt_.seed);
    std::uniform_real_distribution<double> ubeta(-2.0, 3.0), ua(0.0, 2.0), uw(0.1, 2.0),
        ut(0.0, std::log(50.0));
    std::uniform_int_distribution<int> uatoms(0, 5);
    auto random_rep = [&]() {
      hcm::HCMRepresentation rep;
      rep.beta = ubeta(rng);
      rep.a1 = ua(rng);
      rep.a2 = ua(rng);
      int n1 = uatoms(rng), n2 = uatoms(rng);
      for (int i = 0; i < n1; ++i) rep.mu1.emplace_back(std::exp(ut(rng)), uw(rng));
      for (int i = 0; i < n2; ++i) rep.mu2.emplace_back(std::exp(ut(rng)), uw(rng));
      return rep;
    };
    double worst_base = 0.0, worst_closure = 0.0;
    int fails_base = 0, fails_closure = 0;
    std::vector<hcm::HCMRepresentation> integrable;
    for (int i = 0; i < 50; ++i) {
      auto rep = random_rep();
      rep.validate();
      auto H = [rep](double x) { return hcm::eval_representation(rep, x); };
      auto r0 = hcm::hcm_check(H);
      worst_base = std::max(worst_base, r0.max_violation);
      fails_base += (r0.verdict != CMReport::Verdict::consistent);
      if (rep.a1 > 0.05 && rep.beta > 0.2 && integrable.size() < 10) integrable.push_back(rep);
      std::vector<hcm::PosFn> closures = {
          hcm::transform_invert(H),
          hcm::transform_power(H, -1.0),
          hcm::transform_power(H, 0.5),
          hcm::transform_power(H, 1.0),
          hcm::transform_scalepow(H, -2.0),
          hcm::transform_scalepow(H, 3.0),
      };
      for (auto& C : closures) {
        auto rc = hcm::hcm_check(C);
        worst_closure = std::max(worst_closure, rc.max_violation);
        fails_closure += (rc.verdict != CMReport::Verdict::consistent);
      }
    }
    out.push_back(detail::flag_check(S, "50 random representations: all consistent",
                                     std::numeric_limits<double>::quiet_NaN(), fails_base == 0,
                                     "worst violation " + std::to_string(worst_base)));
    out.push_back(detail::flag_check(S, "closures (invert, power {-1,1/2,1}, x^g scaling {-2,3}): all consistent",
                                     std::numeric_limits<double>::quiet_NaN(), fails_closure == 0,
                                     "worst violation " + std::to_string(worst_closure)));
    // products of integrable pairs, normalized to densities
    int fails_prod = 0;
    double worst_prod = 0.0;
    QuadConfig pc;
    pc.rel_tol = 1e-12;
    pc.abs_tol = 1e-250;
    hcm::HCMConfig lite;
    lite.u_set = {0.5, 1.0, 2.0};
    lite.w_points = 12;
    for (std::size_t i = 0; i + 1 < integrable.size() && i < 10; i += 2) {
      auto r1 = integrable[i], r2 = integrable[i + 1];
      auto d1 = [r1](double x) { return hcm::eval_representation(r1, x); };
      auto d2 = [r2](double x) { return hcm::eval_representation(r2, x); };
      double m1 = integrate_half_line(d1, pc).value.real();
      double m2 = integrate_half_line(d2, pc).value.real();
      auto f1 = [d1, m1](double x) { return d1(x) / m1; };
      auto f2 = [d2, m2](double x) { return d2(x) / m2; };
      auto prod = hcm::transform_product(f1, f2, pc);
      auto rp = hcm::hcm_check(prod, lite);
      worst_prod = std::max(worst_prod, rp.max_violation);
      fails_prod += (rp.verdict != CMReport::Verdict::consistent);
    }
    out.push_back(detail::flag_check(S, "products of normalized representation densities: consistent",
                                     std::numeric_limits<double>::quiet_NaN(), fails_prod == 0,
                                     "worst violation " + std::to_string(worst_prod)));
  }
  // G_alpha and g_alpha through the reconstruction evaluator
  for (double a : {1.0 / 3.0, 0.4, 0.45, 0.5}) {
    auto G = g_reconstructed(a);
    auto rg = hcm::hcm_check(G);
    out.push_back(detail::flag_check(S, "G_alpha on the positive axis: consistent", a,
                                     rg.verdict == CMReport::Verdict::consistent,
                                     "max violation " + std::to_string(rg.max_violation)));
    double expo = a / (1.0 - a);
    auto g = [G, a, expo](double x) {
      return std::pow(x, -1.0 / (1.0 - a)) * G(std::pow(x, -expo));
    };
    auto rgd = hcm::hcm_check(g);
    out.push_back(detail::flag_check(S, "g_alpha = x^{-1/(1-a)} G(x^{-a/(1-a)}): consistent", a,
                                     rgd.verdict == CMReport::Verdict::consistent,
                                     "max violation " + std::to_string(rgd.max_violation)));
  }
  // theta decreasing regime: e^{-delta x} / G_alpha(x) is HCM
  for (double a : {0.6, 0.7}) {
    const thorin::ThetaTable& tb = table(a);
    double cal = a_of(a);
    auto H = [&tb, cal](double x) {
      return std::exp(-std::log(cal) - thorin::detail::l_exponent_pos(tb, x));
    };
    auto r = hcm::hcm_check(H);
    out.push_back(detail::flag_check(S, "e^{-dx}/G_alpha(x) (theta decreasing): consistent", a,
                                     r.verdict == CMReport::Verdict::consistent,
                                     "max violation " + std::to_string(r.max_violation)));
  }
  // controls that must be flagged
  {
    hcm::CMConfig cc;
    cc.domain_min = 0.05;
    auto r1 = hcm::cm_check([](double x) { return std::exp(-x * x); }, cc);
    out.push_back(detail::flag_check(S, "control e^{-x^2}: cm_check violated",
                                     std::numeric_limits<double>::quiet_NaN(),
                                     r1.verdict == CMReport::Verdict::violated,
                                     "witness k = " + std::to_string(r1.witness.k)));
    auto r2 = hcm::hcm_check([](double x) { return std::exp(-x * x); });
    out.push_back(detail::flag_check(S, "control e^{-x^2}: hcm_check violated",
                                     std::numeric_limits<double>::quiet_NaN(),
                                     r2.verdict == CMReport::Verdict::violated));
    auto r3 = hcm::cm_check([](double x) { return (2.0 - std::sin(std::log(x))) * std::exp(-x); }, cc);
    out.push_back(detail::flag_check(S, "control (2 - sin(log x)) e^{-x}: cm_check violated",
                                     std::numeric_limits<double>::quiet_NaN(),
                                     r3.verdict == CMReport::Verdict::violated,
                                     "witness k = " + std::to_string(r3.witness.k)));
  }
}

inline void Runner::subordination(std::vector<Check>& out) {
  const std::string S = "subordination";
  // X Y^2 with X, Y independent (1/2,1)-stable equals the (1/4,1) law
  StableParams half{0.5, 1.0};
  auto f = [half](double y) { return density(half, y, DensityMethod::closed_form_levy); };
  auto g = [&f](double s) { return pushforward_power(f, 2.0, s); };
  QuadConfig cfg;
  cfg.rel_tol = 1e-11;
  double worst = 0.0;
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double conv = mult_convolution(f, g, x, cfg);
    double target = density(StableParams{0.25, 1.0}, x);
    worst = std::max(worst, std::fabs(conv - target) / target);
  }
  out.push_back(detail::bound_check(
      S, "density of X Y^2 via mult_convolution vs g_{1/4}, x in {0.25..4}", 0.25, worst, 1e-6));
  // mixture normalization: argument rescale by k = 2^{1/(2a)}, constant in x
  {
    const double alpha2 = 0.8, a = 0.4;
    double k = std::pow(2.0, 1.0 / (2.0 * a));
    double worst_mix = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
      double mix = subordination_mixture(alpha2, 1.0, x);
      double rhs = density(StableParams{a, 1.0}, x / k) / k;
      worst_mix = std::max(worst_mix, std::fabs(mix - rhs) / rhs);
    }
    out.push_back(detail::bound_check(
        S, "mixture(x) = k^{-1} g_{a,1}(x/k) with the e^{-sqrt(2L)} subordinator", a, worst_mix, 1e-6,
        "measured rescale constant k = " + std::to_string(k)));
  }
}

inline void Runner::semigroup(std::vector<Check>& out) {
  const std::string S = "semigroup";
  int mismatches = 0;
  double worst_prod = 0.0;
  bool factors_ok = true;
  auto third = 1.0 / 3.0;
  std::vector<double> grid;
  for (int i = 1; i <= 999; ++i) grid.push_back(i * 1e-3);
  grid.push_back(0.25);
  grid.push_back(third);
  grid.push_back(0.5);
  for (double a : grid) {
    bool expect = (a <= 0.25 + 1e-12) || (a >= third - 1e-12 && a <= 0.5 + 1e-12);
    auto m = hcm::semigroup_membership(a);
    if (m.has_value() != expect) {
      ++mismatches;
      continue;
    }
    if (m) {
      double prod = 1.0;
      for (double f : *m) {
        prod *= f;
        if (f < third - 1e-12 || f > 0.5 + 1e-12) factors_ok = false;
      }
      worst_prod = std::max(worst_prod, std::fabs(prod - a) / a);
    }
  }
  out.push_back(detail::flag_check(S, "verdicts on the 1e-3 grid match (0, 1/4] U [1/3, 1/2]",
                                   std::numeric_limits<double>::quiet_NaN(), mismatches == 0,
                                   std::to_string(mismatches) + " mismatches"));
  out.push_back(detail::flag_check(S, "all factors in [1/3, 1/2]",
                                   std::numeric_limits<double>::quiet_NaN(), factors_ok));
  out.push_back(detail::bound_check(S, "max relative product error", // factors multiply back to alpha
                                    std::numeric_limits<double>::quiet_NaN(), worst_prod, 1e-12));
}

inline std::vector<Check> Runner::run(const std::string& suite, std::vector<double> alphas) {
  std::vector<Check> out;
  auto want = [&](const char* s) { return suite == s || suite == "all"; };
  if (want("exact-half")) exact_half(out);
  if (want("small-z")) small_z(out, alphas.empty() ? std::vector<double>{0.35, 0.4, 0.45} : alphas);
  if (want("asymptotics"))
    asymptotics(out, alphas.empty() ? std::vector<double>{0.35, 0.4, 0.45, 0.5} : alphas);
  if (want("cut-laws")) cut_laws(out, alphas.empty() ? std::vector<double>{0.35, 0.4, 0.45} : alphas);
  if (want("representation"))
    representation(out, alphas.empty() ? std::vector<double>{1.0 / 3.0, 0.4, 0.5, 0.6} : alphas);
  if (want("theta-monotone"))
    theta_monotone(out, alphas.empty()
                            ? std::vector<double>{1.0 / 3.0, 0.4, 0.45, 0.5, 0.6, 0.7}
                            : alphas);
  if (want("hcm")) hcm_suite(out);
  if (want("subordination")) subordination(out);
  if (want("semigroup")) semigroup(out);
  if (out.empty()) throw DomainError("unknown verify suite: " + suite);
  return out;
}

inline nlohmann::json report_json(const std::vector<Check>& checks, const Options& opt) {
  nlohmann::json rows = nlohmann::json::array();
  int passed = 0;
  for (const auto& c : checks) {
    nlohmann::json row{{"suite", c.suite},     {"name", c.name},           {"measured", c.measured},
                       {"expected", c.expected}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (std::isfinite(c.alpha)) row["alpha"] = c.alpha;
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(row);
    passed += c.pass;
  }
  return nlohmann::json{{"seed", opt.seed},
                        {"rel_tol", opt.rel_tol},
                        {"checks", rows},
                        {"passed", passed},
                        {"failed", static_cast<int>(checks.size()) - passed}};
}

}  // namespace verify
}  // namespace stablehcm
