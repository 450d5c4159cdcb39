#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pssmp/errors.hpp"
#include "pssmp/estimates.hpp"

using namespace pssmp;
using doctest::Approx;

namespace {

std::vector<std::pair<double, PhiPtr>> families() {
  std::vector<std::pair<double, PhiPtr>> out;
  for (double a : {0.5, 1.5}) {
    out.push_back({a, std::make_shared<PolyPhi>(0.5, 1.0)});
    out.push_back({a, restart_phi(a)});
    out.push_back({a, std::make_shared<ExpPhi>(1.0, 0.5, 1.0)});
    out.push_back({a, std::make_shared<ExpPhi>(1.0, 2.0, 1.0)});
    out.push_back({a, std::make_shared<ExpPhi>(2.0, 1.0, 0.5)});
    out.push_back({a, std::make_shared<DiracPhi>(1.0)});
    out.push_back({a, std::make_shared<DiracPhi>(3.0)});
  }
  return out;
}

}  // namespace

TEST_CASE("weak scaling of poly densities") {
  for (auto [b, g] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.5}, std::pair{2.0, 2.3}}) {
    const PolyPhi phi(b, g);
    auto lg = [&](double t) { return phi.log_density(t); };
    for (auto kind : {ScalingKind::L_zero, ScalingKind::U_zero}) {
      const auto c = check_weak_scaling(lg, kind, b - 1);
      CHECK(c.pass);
    }
    CHECK(check_weak_scaling(lg, ScalingKind::U_inf, b - 1 - g).pass);
    CHECK(check_weak_scaling(lg, ScalingKind::L_inf, b - 1 - g).pass);
    const auto bad = check_weak_scaling(lg, ScalingKind::U_zero, b - 3);
    CHECK_FALSE(bad.pass);
    CHECK(bad.constant > 1e3);
    CHECK(bad.witness_r < bad.witness_R);
  }
}

TEST_CASE("weak scaling of a constant density") {
  auto lg = [](double) { return 0.0; };
  for (auto kind : {ScalingKind::L_zero, ScalingKind::U_zero}) {
    const auto c = check_weak_scaling(lg, kind, 0.0);
    CHECK(c.pass);
    CHECK(c.constant == Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(check_weak_scaling([](double) { return -INFINITY; }, ScalingKind::L_zero, 0.0),
                  PreconditionError);
}

TEST_CASE("envelope homogeneity and continuity at the band edge") {
  for (const auto& [a, phi] : families()) {
    const Envelope env = Envelope::for_phi(a, phi);
    for (double lam : {0.01, 3.0, 1e4})
      for (auto [x, y] : {std::pair{1.0, 2.0}, std::pair{1.0, 50.0}, std::pair{70.0, 1.0}, std::pair{1e-3, 1e3}})
        CHECK(env(lam * x, lam * y) == Approx(std::pow(lam, -1 - a) * env(x, y)).epsilon(1e-12));
    for (double x : {0.1, 1.0, 7.0}) {
      CHECK(env(x, 5 * x * (1 + 1e-12)) == Approx(env(x, 5 * x)).epsilon(1e-6));
      CHECK(env(5 * x * (1 + 1e-12), x) == Approx(env(5 * x, x)).epsilon(1e-6));
      CHECK(env(x, 2 * x) == Approx(std::pow(2 * x, -1 - a)).epsilon(1e-14));
    }
  }
  const Envelope c = Envelope::compact(0.7);
  CHECK(c(1.0, 100.0) == Approx(std::pow(1.25 * 99.0, -1.7)).epsilon(1e-13));
}

TEST_CASE("log-power branch exponents") {
  // q(y, x) for x << y: y^{-1-alpha} (y/x)^{1-beta}, up to a constant
  const double a = 1.2, b = 0.4, g = 1.3;
  const Envelope env = Envelope::log_power(a, b, g);
  for (double x : {0.01, 1e-3, 1e-5})
    CHECK(env(1.0, x) / env(1.0, 0.1) == Approx(std::pow(0.1 / x, 1 - b)).epsilon(1e-12));
  // upward branch exponent alpha + beta - gamma
  for (double y : {100.0, 1e4})
    CHECK(env(1.0, y) / env(1.0, 10.0) ==
          Approx(std::pow(y / 10.0, -1 - a) * std::pow(y / 10.0, a + b - g)).epsilon(1e-12));
  CHECK(env.family() == EnvelopeFamily::log_power);
  CHECK_FALSE(env.branch_up().empty());
  CHECK_FALSE(env.branch_down().empty());
}

TEST_CASE("exponential family: upward envelope is y^{-1-alpha}") {
  const Envelope env = Envelope::exponential(0.8, 2.0);
  for (double y : {10.0, 1e3, 1e6}) CHECK(env(1.0, y) == Approx(std::pow(y, -1.8)).epsilon(1e-12));
}

TEST_CASE("comparability passes for the supported families") {
  for (const auto& [a, phi] : families()) {
    const ResurrectionKernel k(validate(a, 0.5), phi);
    const auto r = verify_comparability(k, Envelope::for_phi(a, phi));
    CAPTURE(a);
    CAPTURE(phi->describe());
    CHECK(r.pass);
    CHECK(r.near_pass);
    CHECK(r.ratio_max / r.ratio_min <= 1e3);
    CHECK(r.near_max / r.near_min < 10.0);
    CHECK(r.points == 12 * 25 + 1);
  }
}

TEST_CASE("integral envelope fallback matches the closed branch tables") {
  const double a = 1.5;
  const auto phi = std::make_shared<PolyPhi>(0.5, 1.0);
  const ResurrectionKernel k(validate(a, 0.5), phi);
  const auto r = verify_comparability(k, Envelope::integral(a, phi));
  CHECK(r.pass);
  CHECK(r.near_pass);
}

TEST_CASE("a misprinted branch exponent is caught") {
  // sign-flipped upward exponent -(alpha + beta - gamma) equals the table for gamma' = 2(alpha+beta) - gamma
  const double a = 1.5, b = 0.5, g = 1.0;
  const ResurrectionKernel k(validate(a, 0.5), std::make_shared<PolyPhi>(b, g));
  const auto r = verify_comparability(k, Envelope::log_power(a, b, 2 * (a + b) - g));
  CHECK_FALSE(r.pass);
  CHECK(r.ratio_max / r.ratio_min > 1e6);
}

TEST_CASE("serial and parallel sweeps are identical") {
  const double a = 0.5;
  const auto phi = std::make_shared<PolyPhi>(0.5, 1.0);
  const ResurrectionKernel k(validate(a, 0.5), phi);
  ComparabilityOptions o;
  o.parallel = false;
  const auto s = verify_comparability(k, Envelope::for_phi(a, phi), o);
  o.parallel = true;
  const auto p = verify_comparability(k, Envelope::for_phi(a, phi), o);
  CHECK(s.ratio_min == p.ratio_min);
  CHECK(s.ratio_max == p.ratio_max);
  CHECK(s.x_at_min == p.x_at_min);
  CHECK(s.near_max == p.near_max);
}

TEST_CASE("pi envelope") {
  const double a = 1.5;
  const auto p = validate(a, 0.5);
  const auto phi = std::make_shared<PolyPhi>(0.5, 1.0);
  for (double u : {-1.0, 0.0, 1.5}) CHECK(pi_envelope(p, phi, u) == 1.0);
  for (double u : {-5.0, 3.0}) CHECK(pi_envelope(p, phi, u) == Approx(std::exp(u) * phi->density(std::exp(u))).epsilon(1e-14));
  const auto r = verify_pi_comparability(ResurrectionKernel(p, phi));
  CHECK(r.pass);
}
