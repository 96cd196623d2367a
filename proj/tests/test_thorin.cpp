#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>

#include "stablehcm/thorin.hpp"

using namespace stablehcm;
using namespace stablehcm::thorin;

namespace {

// shared small tables; unit scope keeps them cheaper than the defaults
const ThetaTable& table04() {
  static ThetaTable t = build_theta(0.4, 1e-4, 1e4, 600);
  return t;
}
const ThetaTable& table05() {
  static ThetaTable t = build_theta(0.5, 1e-3, 1e3, 128);
  return t;
}

}  // namespace

TEST_CASE("build_theta: endpoints and validation") {
  const auto& t4 = table04();
  CHECK(std::fabs(t4.values.front() - 0.4) < 2e-2);
  CHECK(std::fabs(t4.values.back() - 0.5) < 1e-3);
  for (double v : t4.values) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  const auto& t5 = table05();
  for (double v : t5.values) CHECK(std::fabs(v - 0.5) < 1e-10);
  CHECK_THROWS_AS(build_theta(0.4, 1.0, 10.0, 2), GridTooSmall);
  CHECK_THROWS_AS(build_theta(0.4, 10.0, 1.0, 64), BadRange);
  // t_max far too small to reach the 1/2 plateau
  CHECK_THROWS_AS(build_theta(0.35, 1e-4, 1e-2, 64), EndpointMismatch);
}

TEST_CASE("l_eval: exact normalization at z = 1") {
  auto v = l_eval(table04(), {1.0, 0.0});
  CHECK(v.real() == 1.0);
  CHECK(v.imag() == 0.0);
  CHECK(l_eval_pos(table04(), 1.0) == 1.0);
}

TEST_CASE("l_eval: alpha = 1/2 table gives z^{-1/2}") {
  const auto& t5 = table05();
  for (double z : {0.25, 1.0, 4.0, 25.0}) {
    double expect = 1.0 / std::sqrt(z);
    CHECK(std::fabs(l_eval_pos(t5, z) - expect) / expect < 1e-6);
  }
  auto off_axis = l_eval(t5, {4.0, 0.5});
  auto expect = 1.0 / std::sqrt(std::complex<double>(0.0, 4.0));
  CHECK(std::abs(off_axis - expect) / std::abs(expect) < 1e-6);
}

TEST_CASE("l_eval: conjugation and the cut ratio law") {
  const auto& t4 = table04();
  auto up = l_eval(t4, {0.7, 0.3});
  auto dn = l_eval(t4, {0.7, -0.3});
  CHECK(up.real() == dn.real());
  CHECK(up.imag() == -dn.imag());
  // approaching the cut, the phase jump across it is -2 pi theta(r)
  for (double r : {0.01, 0.5, 3.0, 80.0}) {
    auto lu = l_eval(t4, {r, 1.0 - 1e-4});
    auto ld = l_eval(t4, {r, -(1.0 - 1e-4)});
    double jump = std::arg(lu / ld);
    double theta_r = galpha::theta_at(0.4, r).theta;
    double expect = -2.0 * M_PI * theta_r + 2.0 * M_PI;  // principal branch wraps
    CHECK(std::fabs(normalize_phase_over_pi((jump - expect) / M_PI)) < 1e-3);
  }
}

TEST_CASE("calibrate_a: closed form at alpha = 1/2") {
  double a = calibrate_a(0.5, table05());
  CHECK(std::fabs(a - 0.28209479177387814) < 1e-9);
  CHECK(calibrate_a(0.4, table04()) > 0.0);
}

TEST_CASE("reconstruct: matches the direct evaluators") {
  const auto& t4 = table04();
  double cal = calibrate_a(0.4, t4);
  // z = 1 is the calibration point
  CHECK(std::fabs(reconstruct(0.4, t4, cal, {1.0, 0.0}).real() -
                  galpha::eval(0.4, {1.0, 0.0}).real()) < 1e-14);
  for (double r : {0.2, 1.0, 5.0, 20.0}) {
    auto direct = galpha::eval(0.4, {r, 0.0});
    auto rec = reconstruct(0.4, t4, cal, {r, 0.0});
    CHECK(std::abs(direct - rec) / std::abs(direct) < 1e-3);
  }
  auto direct = galpha::eval(0.4, {3.0, 0.7});
  auto rec = reconstruct(0.4, t4, cal, {3.0, 0.7});
  CHECK(std::abs(direct - rec) / std::abs(direct) < 1e-3);
  // alpha = 1/2: both sides closed form, discretization exact
  double cal5 = calibrate_a(0.5, table05());
  for (double r : {0.5, 4.0}) {
    auto d5 = galpha::eval(0.5, {r, 0.0});
    auto r5 = reconstruct(0.5, table05(), cal5, {r, 0.0});
    CHECK(std::abs(d5 - r5) / std::abs(d5) < 1e-9);
  }
}

TEST_CASE("theta_prime_form: total variation, z-match, log-moment") {
  const auto& t4 = table04();
  CHECK(std::fabs(theta_prime_total(t4) - 0.1) < 1e-3);
  auto tpf = theta_prime_form(0.4, t4, {2.0, 0.0});
  auto direct = galpha::eval(0.4, {2.0, 0.0});
  CHECK(std::abs(tpf - direct) / std::abs(direct) < 5e-3);
  // z -> 0 limits of the theta'-form and the small-z law pin the log-moment:
  // exp(-int log t theta') = K / c_adopted (K the small-z constant)
  double lm = theta_prime_log_moment(t4);
  double oracle = galpha::small_z_constant(0.4) / galpha::constants(0.4).c_adopted;
  CHECK(std::fabs(std::exp(-lm) - oracle) < 1e-3);
  // at alpha = 1/2, theta' = 0: the form reduces to the closed form exactly
  auto half = theta_prime_form(0.5, table05(), {4.0, 0.0});
  CHECK(std::fabs(half.real() - 0.051888437177574338) / 0.051888437177574338 < 1e-6);
}

TEST_CASE("theta_prime_form: refuses non-monotone tables") {
  ThetaTable t6 = build_theta(0.6, 1e-3, 1e3, 64);
  CHECK(monotonicity(t6).verdict == MonotonicityReport::Verdict::decreasing);
  CHECK_THROWS_AS(theta_prime_form(0.6, t6, {1.0, 0.0}), NotMonotone);
}

TEST_CASE("monotonicity verdicts") {
  using V = MonotonicityReport::Verdict;
  CHECK(monotonicity(table04()).verdict == V::increasing);
  CHECK(monotonicity(table05()).verdict == V::constant);
  ThetaTable synth;
  synth.alpha = 0.4;
  synth.nodes = {1.0, 2.0, 3.0, 4.0};
  synth.values = {0.4, 0.45, 0.42, 0.48};
  auto rep = monotonicity(synth);
  CHECK(rep.verdict == V::neither);
  // the decreasing-verdict violation (+0.06 at node 4) outweighs the
  // increasing-verdict one (-0.03 at node 3)
  CHECK(rep.worst_margin == Catch::Approx(0.06));
  CHECK(rep.location == 4.0);
}

TEST_CASE("serialization: CSV round trip and sidecar fields") {
  const auto& t4 = table04();
  std::ostringstream os;
  write_csv(t4, os);
  std::istringstream is(os.str());
  ThetaTable back = load_csv(is, 0.4);
  REQUIRE(back.size() == t4.size());
  for (int i = 0; i < t4.size(); ++i) {
    CHECK(back.nodes[i] == t4.nodes[i]);  // 17 digits round-trips doubles
    CHECK(back.values[i] == t4.values[i]);
  }
  auto side = sidecar_json(t4, calibrate_a(0.4, t4));
  CHECK(side["alpha"] == 0.4);
  CHECK(side["n"] == t4.size());
  CHECK(side["t_min"] == t4.t_min());
  CHECK(side["t_max"] == t4.t_max());
  CHECK(side["delta"].get<double>() == Catch::Approx(0.32573011399138879));
  CHECK(side["a"].get<double>() > 0.0);
}
