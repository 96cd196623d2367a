#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "stablehcm/hcm.hpp"

using namespace stablehcm;
using namespace stablehcm::hcm;

TEST_CASE("eval_representation: basic algebra") {
  HCMRepresentation empty;
  for (double x : {0.1, 1.0, 7.0}) CHECK(eval_representation(empty, x) == 1.0);
  HCMRepresentation gamma_like;
  gamma_like.beta = 2.2;
  gamma_like.a1 = 1.0;
  for (double x : {0.5, 1.0, 3.0})
    CHECK(std::fabs(eval_representation(gamma_like, x) - std::pow(x, 1.2) * std::exp(-x)) < 1e-15);
  HCMRepresentation full;
  full.c = 2.0;
  full.beta = -1.0;
  full.a1 = 0.7;
  full.a2 = 0.3;
  full.mu1 = {{2.0, 1.5}};
  full.mu2 = {{5.0, 0.25}};
  // every log term vanishes at x = 1
  CHECK(std::fabs(eval_representation(full, 1.0) - 2.0 * std::exp(-1.0)) < 1e-15);
  CHECK_THROWS_AS(eval_representation(full, 0.0), DomainError);
  HCMRepresentation bad;
  bad.mu1 = {{0.5, 1.0}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("cm_check: classic consistent cases") {
  auto r1 = cm_check([](double x) { return std::exp(-x); });
  CHECK(r1.verdict == CMReport::Verdict::consistent);
  auto r2 = cm_check([](double x) { return 1.0 / (1.0 + x); });
  CHECK(r2.verdict == CMReport::Verdict::consistent);
  auto r3 = cm_check([](double x) { return std::pow(x, -0.3); }, CMConfig{0.1});
  CHECK(r3.verdict == CMReport::Verdict::consistent);
}

TEST_CASE("cm_check: e^{-x^2} is violated with a second-order witness") {
  CMConfig cfg;
  cfg.domain_min = 0.05;
  auto r = cm_check([](double x) { return std::exp(-x * x); }, cfg);
  CHECK(r.verdict == CMReport::Verdict::violated);
  CHECK(r.witness.k == 2);
  CHECK(r.max_violation > cfg.tol);
  CHECK_FALSE(r.witness.u.has_value());
}

TEST_CASE("cm_check: multiplicative oscillation is violated") {
  CMConfig cfg;
  cfg.domain_min = 0.05;
  auto r = cm_check([](double x) { return (2.0 - std::sin(std::log(x))) * std::exp(-x); }, cfg);
  CHECK(r.verdict == CMReport::Verdict::violated);
}

TEST_CASE("cm_check: error paths") {
  CHECK_THROWS_AS(cm_check([](double x) { return 0.0 / 0.0 + x; }), NonFiniteSample);
  CMConfig cfg;
  cfg.orders = 9;
  CHECK_THROWS_AS(cm_check([](double x) { return std::exp(-x); }, cfg), DomainError);
}

TEST_CASE("hcm_check: gamma kernel is exactly HCM") {
  auto r = hcm_check([](double x) { return std::pow(x, 1.5) * std::exp(-x); });
  CHECK(r.verdict == CMReport::Verdict::consistent);
}

TEST_CASE("hcm_check: e^{-x^2} is flagged") {
  auto r = hcm_check([](double x) { return std::exp(-x * x); });
  CHECK(r.verdict == CMReport::Verdict::violated);
  REQUIRE(r.witness.u.has_value());
  CHECK(*r.witness.u <= 0.5);  // violation lives at small u w < ~0.7
}

TEST_CASE("hcm_check: phi_u is symmetric in v -> 1/v") {
  // documented once: the root choice v >= 1 is immaterial
  auto H = [](double x) { return std::pow(x, 0.7) * std::exp(-x - 0.2 / x); };
  for (double u : {0.5, 2.0}) {
    for (double w : {2.5, 10.0}) {
      double v = 0.5 * (w + std::sqrt((w - 2.0) * (w + 2.0)));
      double a = H(u * v) * H(u / v);
      double b = H(u / v) * H(u * v);
      CHECK(a == b);
      double winv = v + 1.0 / v;
      CHECK(std::fabs(winv - w) < 1e-12 * w);
    }
  }
}

TEST_CASE("transforms: algebra and closure under hcm_check") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ub(-2.0, 3.0), ua(0.0, 2.0);
  for (int trial = 0; trial < 8; ++trial) {
    HCMRepresentation rep;
    rep.beta = ub(rng);
    rep.a1 = ua(rng);
    rep.a2 = ua(rng);
    rep.mu1 = {{1.0 + ua(rng), 0.5}, {3.0 + ua(rng), 1.0}};
    rep.mu2 = {{1.5 + ua(rng), 0.8}};
    PosFn H = [rep](double x) { return eval_representation(rep, x); };
    CHECK(hcm_check(H).verdict == CMReport::Verdict::consistent);
    CHECK(hcm_check(transform_invert(H)).verdict == CMReport::Verdict::consistent);
    for (double b : {-1.0, 0.5, 1.0})
      CHECK(hcm_check(transform_power(H, b)).verdict == CMReport::Verdict::consistent);
    for (double g : {-2.0, 3.0})
      CHECK(hcm_check(transform_scalepow(H, g)).verdict == CMReport::Verdict::consistent);
  }
  PosFn H = [](double x) { return std::exp(-x); };
  // invert twice is the identity
  auto HH = transform_invert(transform_invert(H));
  for (double x : {0.3, 1.7}) CHECK(HH(x) == H(x));
  // power 1 is the identity
  auto H1 = transform_power(H, 1.0);
  for (double x : {0.3, 1.7}) CHECK(H1(x) == H(x));
  CHECK_THROWS_AS(transform_power(H, 1.5), DomainError);
}

TEST_CASE("transform_product: product of exponential densities is HCM") {
  DensityFn e1 = [](double x) { return std::exp(-x); };
  DensityFn e2 = [](double x) { return 2.0 * std::exp(-2.0 * x); };
  QuadConfig cfg;
  cfg.rel_tol = 1e-12;
  auto prod = transform_product(e1, e2, cfg);
  HCMConfig lite;
  lite.u_set = {0.5, 1.0, 2.0};
  lite.w_points = 10;
  CHECK(hcm_check(prod, lite).verdict == CMReport::Verdict::consistent);
}

TEST_CASE("semigroup_membership: boundary cases and factors") {
  auto quarter = semigroup_membership(0.25);
  REQUIRE(quarter.has_value());
  REQUIRE(quarter->size() == 2);
  CHECK((*quarter)[0] == 0.5);
  CHECK((*quarter)[1] == 0.5);

  CHECK_FALSE(semigroup_membership(0.3).has_value());
  CHECK_FALSE(semigroup_membership(0.26).has_value());
  CHECK_FALSE(semigroup_membership(0.51).has_value());
  CHECK_FALSE(semigroup_membership(0.9).has_value());

  auto tenth = semigroup_membership(0.1);
  REQUIRE(tenth.has_value());
  REQUIRE(tenth->size() == 3);
  double prod = 1.0;
  for (double f : *tenth) {
    CHECK(std::fabs(f - 0.46415888336127786) < 1e-12);
    CHECK(f >= 1.0 / 3.0 - 1e-12);
    CHECK(f <= 0.5 + 1e-12);
    prod *= f;
  }
  CHECK(std::fabs(prod - 0.1) / 0.1 < 1e-12);

  // double(1/3) sits just below the exact boundary; the slack admits it
  auto third = semigroup_membership(1.0 / 3.0);
  REQUIRE(third.has_value());
  CHECK(third->size() == 1);
  auto half = semigroup_membership(0.5);
  REQUIRE(half.has_value());
  CHECK(half->size() == 1);
  CHECK_THROWS_AS(semigroup_membership(1.5), DomainError);
}

TEST_CASE("report_json shape") {
  CMReport rep;
  rep.verdict = CMReport::Verdict::violated;
  rep.max_violation = 0.25;
  rep.witness = {1.5, 0.1, 2, 0.5};
  rep.orders = 8;
  rep.tol = 1e-7;
  auto j = report_json(rep);
  CHECK(j["verdict"] == "violated");
  CHECK(j["max_violation"] == 0.25);
  CHECK(j["witness"]["x0"] == 1.5);
  CHECK(j["witness"]["k"] == 2);
  CHECK(j["witness"]["u"] == 0.5);
  CHECK(j["orders"] == 8);
}
