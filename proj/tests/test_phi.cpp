#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "pssmp/errors.hpp"
#include "pssmp/phi.hpp"
#include "pssmp/quad.hpp"

using namespace pssmp;
using doctest::Approx;

namespace {

// int u^s phi(u) du by quadrature in v = log u
cplx mellin_quad(const PhiMeasure& phi, cplx s) {
  auto g = [&](double v, bool im) {
    const double u = std::exp(v);
    if (u == 0.0 || std::isinf(u)) return 0.0;
    const cplx w = std::exp(s * v + v + phi.log_density(u));
    return im ? w.imag() : w.real();
  };
  auto re = [&](double v) { return g(v, false); };
  auto im = [&](double v) { return g(v, true); };
  return {quad::line(re, {-5, 0, 5}, 0.5), quad::line(im, {-5, 0, 5}, 0.5)};
}

template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, F - i / n, (i + 1) / n - F});
  }
  return d;
}

std::vector<double> draw(const PhiMeasure& phi, int n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::vector<double> out(n);
  for (auto& x : out) x = phi.sample(rng);
  return out;
}

}  // namespace

TEST_CASE("mellin(0) = 1 for every family") {
  const PolyPhi poly(0.5, 1.0);
  const ExpPhi ex(1.0, 2.0, 1.0);
  const DiracPhi d(2.0);
  for (const PhiMeasure* m : {static_cast<const PhiMeasure*>(&poly), static_cast<const PhiMeasure*>(&ex),
                              static_cast<const PhiMeasure*>(&d)})
    CHECK(std::abs(m->mellin(0.0) - 1.0) < 1e-14);
  const auto t = from_generator([](double) { return 1.0; }, 1.0);
  CHECK(std::abs(t->mellin(0.0) - 1.0) < 1e-8);
}

TEST_CASE("closed-form Mellin transforms") {
  const PolyPhi poly(0.4, 1.3);
  for (double th : {-3.0, 0.7, 2.0}) {
    const cplx it(0, th);
    const cplx ref = std::exp(ln_gamma(0.4 + it) + ln_gamma(0.9 - it) - ln_gamma(0.4) - ln_gamma(0.9));
    CHECK(std::abs(poly.mellin(it) - ref) < 1e-13);
    const DiracPhi d(2.5);
    CHECK(std::abs(d.mellin(it) - std::exp(it * std::log(2.5))) < 1e-14);
  }
  const PolyPhi p15(1.0, 1.5);
  CHECK(std::abs(p15.mellin(0.3) - mellin_quad(p15, 0.3)) < 1e-9);
}

TEST_CASE("PolyPhi Mellin on the imaginary axis against quadrature") {
  const PolyPhi poly(0.5, 1.0);
  for (double th = -10.0; th <= 10.0; th += 1.25) {
    CAPTURE(th);
    CHECK(std::abs(poly.mellin(cplx(0, th)) - mellin_quad(poly, cplx(0, th))) < 1e-8);
  }
  const ExpPhi ex(2.0, 1.0, 0.5);
  for (double th : {0.5, 1.0, 2.0}) CHECK(std::abs(ex.mellin(cplx(0, th)) - mellin_quad(ex, cplx(0, th))) < 1e-8);
}

TEST_CASE("Mellin outside the strip is an error") {
  const PolyPhi poly(1.0, 1.5);
  CHECK_THROWS_AS(poly.mellin(0.5), DivergenceError);
  CHECK_THROWS_AS(poly.mellin(0.7), DivergenceError);
  CHECK_THROWS_AS(poly.mellin(-1.2), DivergenceError);
}

TEST_CASE("Mellin is log-convex on real s") {
  const PolyPhi poly(0.7, 2.4);
  const ExpPhi ex(1.0, 0.5, 2.0);
  for (const PhiMeasure* m : {static_cast<const PhiMeasure*>(&poly), static_cast<const PhiMeasure*>(&ex)})
    for (double s = 0.1; s < 1.5; s += 0.2) {
      const double a = std::log(m->mellin(s - 0.1).real());
      const double b = std::log(m->mellin(s).real());
      const double c = std::log(m->mellin(s + 0.1).real());
      CHECK(a + c - 2 * b >= -1e-13);
    }
}

TEST_CASE("log moments") {
  CHECK(std::abs(PolyPhi(0.5, 1.0).log_moment()) < 1e-15);
  for (double b : {0.3, 1.0, 2.5}) CHECK(ExpPhi(1.0, b, 1.0).log_moment() == Approx(digamma(b)).epsilon(1e-14));
  CHECK(DiracPhi(std::exp(1.0)).log_moment() == Approx(1.0).epsilon(1e-15));
  // derivative of the Mellin transform at 0
  const PolyPhi poly(0.8, 2.1);
  const double h = 1e-5;
  const double fd = (poly.mellin(h).real() - poly.mellin(-h).real()) / (2 * h);
  CHECK(poly.log_moment() == Approx(fd).epsilon(1e-8));
}

TEST_CASE("kappa0") {
  CHECK(PolyPhi(1.0, 1.5).kappa0() == Approx(0.5));
  CHECK(std::isinf(ExpPhi(1.0, 2.0, 1.0).kappa0()));
  CHECK(std::isinf(DiracPhi(3.0).kappa0()));
  CHECK(restart_phi(0.5)->kappa0() == Approx(0.5));
}

TEST_CASE("densities integrate to one") {
  for (auto phi : {PhiPtr(new PolyPhi(0.3, 0.8)), PhiPtr(new ExpPhi(2.0, 1.5, 0.7))})
    CHECK(std::abs(mellin_quad(*phi, 0.0) - 1.0) < 1e-10);
}

TEST_CASE("PolyPhi sampler passes KS") {
  const int n = 100000;
  for (auto bg : {std::pair{0.5, 1.0}, std::pair{1.0, 2.5}, std::pair{2.0, 2.7}}) {
    const PolyPhi poly(bg.first, bg.second);
    const double d = ks_statistic(draw(poly, n, 11), [&](double t) {
      return boost::math::ibeta(bg.first, bg.second - bg.first, t / (1 + t));
    });
    CHECK(d < 1.63 / std::sqrt(n));
  }
}

TEST_CASE("ExpPhi sampler passes KS") {
  const int n = 100000;
  const ExpPhi ex(2.0, 1.5, 0.7);
  const double d = ks_statistic(draw(ex, n, 12), [&](double t) {
    return boost::math::gamma_p(1.5 / 0.7, 2.0 * std::pow(t, 0.7));
  });
  CHECK(d < 1.63 / std::sqrt(n));
}

TEST_CASE("Dirac sampler") {
  for (double x : draw(DiracPhi(2.0), 100, 3)) CHECK(x == 2.0);
}

TEST_CASE("sample log mean converges to log_moment") {
  const int n = 100000;
  for (auto phi : {PhiPtr(new PolyPhi(0.6, 2.0)), PhiPtr(new ExpPhi(1.0, 2.0, 1.0))}) {
    const auto xs = draw(*phi, n, 5);
    double s = 0, ss = 0;
    for (double x : xs) s += std::log(x);
    const double m = s / n;
    for (double x : xs) ss += (std::log(x) - m) * (std::log(x) - m);
    const double se = std::sqrt(ss / (n - 1) / n);
    CHECK(std::abs(m - phi->log_moment()) < 4 * se);
  }
}

TEST_CASE("symmetry verdicts") {
  for (double a : {0.5, 1.0, 1.5}) {
    CHECK(is_symmetric(PolyPhi(1.0, 1.0 + a), a).symmetric);
    CHECK(is_symmetric(*symmetric_poly_phi(a, 0.7), a).symmetric);
    CHECK_FALSE(is_symmetric(PolyPhi(1.0, 2.0 + a), a).symmetric);
    CHECK_FALSE(is_symmetric(ExpPhi(1.0, 0.5, 1.0), a).symmetric);
    CHECK(is_symmetric(ExpPhi(1.0, 0.5, 1.0), a).residual > 0.1);
  }
  CHECK(is_symmetric(DiracPhi(1.0), 0.7).symmetric);
  CHECK_FALSE(is_symmetric(DiracPhi(2.0), 0.7).symmetric);
}

TEST_CASE("from_generator: constant f at alpha = 1 is PolyPhi(1, 2)") {
  const auto t = from_generator([](double) { return 1.0; }, 1.0);
  const PolyPhi ref(1.0, 2.0);
  // log-log interpolation error is O(h^2) in the cell width h
  for (double x : {1e-4, 0.01, 0.3, 1.0, 4.0, 100.0, 1e4}) {
    CHECK(t->density(x) == Approx(ref.density(x)).epsilon(2e-4));
    const auto fine = from_generator([](double) { return 1.0; }, 1.0, 600);
    CHECK(fine->density(x) == Approx(ref.density(x)).epsilon(2e-6));
  }
  CHECK(is_symmetric(*t, 1.0).symmetric);
}

TEST_CASE("from_generator: f(s) = 1/s is normalized and symmetric") {
  const double a = 1.5;
  auto shape = [a](double t) { return 1.0 / (t + 1 / t) / std::pow(1 + t, 1 + a); };
  auto shape_v = [&](double v) { return std::exp(v) * shape(std::exp(v)); };
  const double z = quad::line(shape_v, {-5, 0, 5}, 0.5);
  const auto t = from_generator([](double s) { return 1.0 / s; }, a, 600);
  std::vector<double> nodes;
  for (double g : t->grid()) nodes.push_back(std::log(g));
  // the interpolant is smooth inside each cell; tails beyond 1e+-6 are below 1e-8
  const double mass = quad::cells([&](double v) { return std::exp(v) * t->density(std::exp(v)); }, nodes);
  CHECK(std::abs(mass - 1.0) < 1e-8);
  CHECK(is_symmetric(*t, a).symmetric);
  for (double x : {0.01, 0.5, 7.0}) CHECK(t->density(x) == Approx(shape(x) / z).epsilon(1e-5));
}

TEST_CASE("from_generator rejects generators without a normalizable density") {
  // f(s) = s gives phi(t) ~ 1/t at 0
  CHECK_THROWS_AS(from_generator([](double s) { return s; }, 1.5), DivergenceError);
  CHECK_THROWS_AS(from_generator([](double s) { return s * s * s; }, 0.5), DivergenceError);
}

TEST_CASE("TabulatedPhi from a CSV reproduces the source measure") {
  const PolyPhi src(0.5, 2.0);
  const char* path = "test_phi_table.csv";
  {
    std::ofstream f(path);
    f << "t,density\n";
    for (int k = -240; k <= 240; ++k) {
      const double t = std::pow(10.0, k / 40.0);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, src.density(t));
      f << buf;
    }
  }
  const auto tab = load_table(path);
  std::remove(path);
  CHECK(tab->tail_exponent_low() == Approx(-0.5).epsilon(1e-3));
  CHECK(tab->tail_exponent_high() == Approx(-2.5).epsilon(1e-3));
  CHECK(tab->log_moment() == Approx(src.log_moment()).epsilon(1e-4));
  CHECK(std::abs(tab->mellin(cplx(0, 1)) - src.mellin(cplx(0, 1))) < 1e-4);
  const int n = 50000;
  const double d = ks_statistic(draw(*tab, n, 9), [&](double t) {
    return boost::math::ibeta(0.5, 1.5, t / (1 + t));
  });
  CHECK(d < 1.63 / std::sqrt(n));
}

TEST_CASE("parse_phi") {
  CHECK(dynamic_cast<const PolyPhi&>(*parse_phi("poly:beta=0.4,gamma=1", 1.5, 0.6)).beta() == 0.4);
  const auto& tr = dynamic_cast<const PolyPhi&>(*parse_phi("trace", 1.5, 0.6));
  CHECK(tr.beta() == Approx(1 - 1.5 * 0.6));
  CHECK(tr.gamma() == 1.0);
  CHECK(dynamic_cast<const PolyPhi&>(*parse_phi("restart", 0.5, 0.5)).gamma() == 1.5);
  CHECK(parse_phi("dirac:a=2", 1, 0.5)->atom().value() == 2.0);
  CHECK(phi_spec_coupled("trace"));
  CHECK_FALSE(phi_spec_coupled("dirac:a=1"));
  CHECK_THROWS_AS(parse_phi("poly:beta=2,gamma=1", 1, 0.5), ParameterError);
  CHECK_THROWS_AS(parse_phi("nonsense", 1, 0.5), ParameterError);
  CHECK_THROWS_AS(parse_phi("poly:beta=x,gamma=1", 1, 0.5), ParameterError);
}
