#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "pssmp/errors.hpp"
#include "pssmp/quad.hpp"
#include "pssmp/stable.hpp"

using namespace pssmp;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

namespace {

const double kGrid[][2] = {{0.3, 0.2}, {0.5, 0.5}, {0.8, 0.9}, {1.0, 0.5},
                           {1.2, 0.55}, {1.5, 0.6}, {1.8, 0.5}, {1.9, 0.52}};

// Int (e^{i th y} - 1 - i th y 1{|y|<=1}) mu(y) dy, split into re/im parts.
cplx levy_khintchine_integral(const StableParams& p, double th) {
  // cos t - 1 and sin t - t without cancellation
  auto cm1 = [](double t) { return -2.0 * std::pow(std::sin(t / 2), 2); };
  auto sm = [](double t) {
    if (std::abs(t) > 0.1) return std::sin(t) - t;
    const double t2 = t * t;
    return -t * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
  };
  auto re = [&](double y) { return y == 0.0 ? 0.0 : cm1(th * y) * mu_density(p, y); };
  auto im_in = [&](double y) { return y == 0.0 ? 0.0 : sm(th * y) * mu_density(p, y); };
  auto im_out = [&](double y) { return std::sin(th * y) * mu_density(p, y); };
  const double r = quad::finite(re, -1, 0) + quad::finite(re, 0, 1) + quad::lower_tail(re, -1) +
                   quad::upper_tail(re, 1);
  const double i = quad::finite(im_in, -1, 0) + quad::finite(im_in, 0, 1) +
                   quad::lower_tail(im_out, -1) + quad::upper_tail(im_out, 1);
  return {r, i};
}

}  // namespace

TEST_CASE("validate accepts the permissible set and rejects the rest") {
  const auto s = validate(0.5, 0.5);
  CHECK(s.c_plus == Approx(s.c_minus).epsilon(1e-15));
  CHECK_THROWS_AS(validate(1.5, 0.2), ParameterError);
  CHECK_THROWS_AS(validate(1.0, 0.6), ParameterError);
  CHECK_THROWS_AS(validate(2.0, 0.5), ParameterError);
  CHECK_THROWS_AS(validate(0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(validate(0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(validate(1.5, 1.0 / 1.5), ParameterError);
  const auto one = validate(1.0, 0.5);
  CHECK(one.drift_a == 0.0);
  CHECK(one.c_plus == Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(admissible(1.5, 0.5));
  CHECK_FALSE(admissible(1.5, 0.3));
}

TEST_CASE("stable constants") {
  for (const auto& g : kGrid) {
    const auto p = validate(g[0], g[1]);
    using boost::math::tgamma;
    const double a = p.alpha;
    CHECK(p.c_plus == Approx(tgamma(a + 1) / (tgamma(a * p.rho) * tgamma(1 - a * p.rho))).epsilon(1e-13));
    CHECK(p.c_minus ==
          Approx(tgamma(a + 1) / (tgamma(a * p.rho_hat) * tgamma(1 - a * p.rho_hat))).epsilon(1e-13));
    CHECK(p.c_plus > 0.0);
    CHECK(p.c_minus > 0.0);
    if (a != 1.0) CHECK(p.drift_a == Approx((p.c_plus - p.c_minus) / (a - 1)).epsilon(1e-13));
    CHECK((p.rho == 0.5) == (std::abs(p.c_plus - p.c_minus) < 1e-15));
  }
}

TEST_CASE("nu_density") {
  const auto s = validate(0.5, 0.5);
  CHECK(nu_density(s, 0.7) == Approx(nu_density(s, -0.7)).epsilon(1e-15));
  CHECK(nu_density(s, 2.0) == Approx(std::pow(2.0, -1.5) * nu_density(s, 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(nu_density(s, 0.0), DomainError);
  const auto p = validate(1.5, 0.6);
  CHECK(nu_density(p, -0.4) == Approx(p.c_minus * std::pow(0.4, -2.5)).epsilon(1e-14));
}

TEST_CASE("mu_density") {
  const auto s = validate(0.5, 0.5);
  // mu(log(z/x)) = x^alpha z nu(z - x)
  CHECK(mu_density(s, std::log(2.0)) == Approx(2.0 * nu_density(s, 1.0)).epsilon(1e-14));
  CHECK(mu_density(s, std::log(0.5)) == Approx(0.5 * nu_density(s, -0.5)).epsilon(1e-14));
  const auto one = validate(1.0, 0.5);
  const double e = std::exp(1.0);
  CHECK(mu_density(one, 1.0) == Approx(e / (kPi * (e - 1) * (e - 1))).epsilon(1e-14));
  const auto p = validate(1.5, 0.6);
  CHECK(mu_density(p, 1e-7) * std::pow(1e-7, 2.5) == Approx(p.c_plus).epsilon(1e-6));
  CHECK(mu_density(p, -1e-7) * std::pow(1e-7, 2.5) == Approx(p.c_minus).epsilon(1e-6));
  CHECK_THROWS_AS(mu_density(p, 0.0), DomainError);
}

TEST_CASE("killing rate and Psi*(0)") {
  CHECK(killing_rate(validate(1.0, 0.5)) == Approx(1.0 / kPi).epsilon(1e-14));
  for (const auto& g : kGrid) {
    const auto p = validate(g[0], g[1]);
    const cplx v = psi_star(p, 0.0);
    CHECK(std::abs(v - killing_rate(p)) < 1e-12);
    CHECK(std::abs(v.imag()) < 1e-14);
    for (double th : {0.3, 1.7}) CHECK(std::abs(psi_star(p, -th) - std::conj(psi_star(p, th))) < 1e-12);
  }
}

TEST_CASE("moment integrals of mu are finite") {
  for (const auto& g : kGrid) {
    const auto p = validate(g[0], g[1]);
    auto y2 = [&](double y) { return y == 0.0 ? 0.0 : y * y * mu_density(p, y); };
    auto m = [&](double y) { return mu_density(p, y); };
    auto ay = [&](double y) { return std::abs(y) * mu_density(p, y); };
    CHECK(std::isfinite(quad::finite(y2, -1, 0) + quad::finite(y2, 0, 1)));
    CHECK(std::isfinite(quad::lower_tail(m, -1) + quad::upper_tail(m, 1)));
    CHECK(std::isfinite(quad::lower_tail(ay, -1) + quad::upper_tail(ay, 1)));
  }
}

TEST_CASE("Psi* against the Levy-Khintchine integral with triple (b, 0, mu) and killing") {
  for (const auto& g : kGrid) {
    const auto p = validate(g[0], g[1]);
    const double b = linear_term_b(p);
    for (double th : {0.5, 1.0, 2.0}) {
      const cplx ref = killing_rate(p) + cplx(0, b * th) - levy_khintchine_integral(p, th);
      CAPTURE(g[0]);
      CAPTURE(th);
      CHECK(std::abs(psi_star(p, th) - ref) < 1e-8);
    }
  }
}

TEST_CASE("symmetric case: -b equals the principal value integral") {
  for (double a : {0.3, 0.5, 0.8, 1.0, 1.3, 1.7}) {
    const auto p = validate(a, 0.5);
    CAPTURE(a);
    CHECK(-linear_term_b(p) == Approx(pv_integral_y_mu(p)).epsilon(1e-8));
    if (a < 1.0) {
      auto f = [&](double y) { return y * (mu_density(p, y) - mu_density(p, -y)); };
      CHECK(pv_integral_y_mu(p) == Approx(quad::finite(f, 0.0, 1.0)).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(pv_integral_y_mu(validate(1.5, 0.6)), PreconditionError);
}

TEST_CASE("xi_mean = -b + int_{|y|>=1} y mu") {
  const auto p = validate(1.2, 0.55);
  CHECK(xi_mean(p) == Approx(-linear_term_b(p) + big_jump_mean(p)).epsilon(1e-14));
}

TEST_CASE("sigma_gamma forms agree and vanish at alpha = 1 + 2 gamma") {
  for (double a : {0.4, 1.0, 1.6})
    for (double g : {-0.5, 0.0, 0.3})
      for (double x : {0.05, 0.7, 3.0}) {
        const double first = std::exp((1 + g) * x) / std::pow(std::expm1(x), 1 + a) -
                             std::exp(-(1 + g) * x) / std::pow(-std::expm1(-x), 1 + a);
        CHECK(std::abs(sigma_gamma(a, g, x) - first) <= 1e-10 * std::abs(first) + 1e-14);
      }
  for (double x : {0.01, 1.0, 50.0, 800.0}) CHECK(sigma_gamma(1.6, 0.3, x) == 0.0);
  CHECK(sigma_gamma(1.3, 0.3, 2.0) > 0.0);
  CHECK(sigma_gamma(1.8, 0.3, 2.0) < 0.0);
  CHECK(std::isfinite(sigma_gamma(0.5, 0.9, 900.0)));
}

TEST_CASE("log_expm1") {
  for (double y : {1e-10, 1e-3, 1.0, 30.0, 800.0})
    CHECK(log_expm1(y) == Approx(y > 700 ? y : std::log(std::expm1(y))).epsilon(1e-14));
}
