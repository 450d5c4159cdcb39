#include "pssmp/stable.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pssmp/errors.hpp"
#include "pssmp/quad.hpp"

namespace pssmp {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double alpha, double rho) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << alpha << ", rho=" << rho << ")";
  return os.str();
}

// log u - (u - 1) for u = 1 + d
double log1p_minus(double d) {
  if (std::abs(d) < 1e-3) {
    const double d2 = d * d;
    return d2 * (-0.5 + d * (1.0 / 3.0 + d * (-0.25 + d * (0.2 - d / 6.0))));
  }
  return std::log1p(d) - d;
}

}  // namespace

bool admissible(double alpha, double rho) {
  if (!(alpha > 0.0 && alpha < 2.0)) return false;
  if (alpha < 1.0) return rho > 0.0 && rho < 1.0;
  if (alpha == 1.0) return rho == 0.5;
  return rho > 1.0 - 1.0 / alpha && rho < 1.0 / alpha;
}

StableParams validate(double alpha, double rho) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw ParameterError("alpha must lie in (0,2) " + fmt(alpha, rho));
  if (alpha < 1.0 && !(rho > 0.0 && rho < 1.0))
    throw ParameterError("for alpha < 1, rho must lie in (0,1) " + fmt(alpha, rho));
  if (alpha == 1.0 && rho != 0.5)
    throw ParameterError("for alpha = 1, rho must equal 1/2 " + fmt(alpha, rho));
  if (alpha > 1.0 && !(rho > 1.0 - 1.0 / alpha && rho < 1.0 / alpha)) {
    std::ostringstream os;
    os.precision(10);
    os << "for alpha > 1, rho must lie in (1-1/alpha, 1/alpha) = (" << 1.0 - 1.0 / alpha << ", "
       << 1.0 / alpha << ") " << fmt(alpha, rho);
    throw ParameterError(os.str());
  }
  StableParams p{};
  p.alpha = alpha;
  p.rho = rho;
  p.rho_hat = 1.0 - rho;
  const double g = std::tgamma(alpha + 1.0);
  p.c_plus = g / (std::tgamma(alpha * rho) * std::tgamma(1.0 - alpha * rho));
  p.c_minus = g / (std::tgamma(alpha * p.rho_hat) * std::tgamma(1.0 - alpha * p.rho_hat));
  if (rho == 0.5) p.c_minus = p.c_plus;
  p.drift_a = alpha == 1.0 ? 0.0 : (p.c_plus - p.c_minus) / (alpha - 1.0);
  return p;
}

double nu_density(const StableParams& p, double x) {
  if (x == 0.0) throw DomainError("nu_density: x = 0");
  return x > 0.0 ? p.c_plus * std::pow(x, -1.0 - p.alpha)
                 : p.c_minus * std::pow(-x, -1.0 - p.alpha);
}

double log_expm1(double y) { return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y)); }

double mu_density(const StableParams& p, double y) {
  if (y == 0.0) throw DomainError("mu_density: y = 0");
  if (y > 0.0) return p.c_plus * std::exp(y - (1.0 + p.alpha) * log_expm1(y));
  return p.c_minus * std::exp(y - (1.0 + p.alpha) * std::log(-std::expm1(y)));
}

double killing_rate(const StableParams& p) { return p.c_minus / p.alpha; }

cplx psi_star(const StableParams& p, double theta) {
  const cplx it(0.0, theta);
  const double ar = p.alpha * p.rho_hat;
  return std::exp(ln_gamma(p.alpha - it) + ln_gamma(1.0 + it) - ln_gamma(ar - it) -
                  ln_gamma(1.0 + it - ar));
}

double linear_term_b(const StableParams& p) {
  const double a = p.alpha;
  // (0, 1/e): only the -(u-1) part is active, integral in closed form
  const double L = std::log1p(-std::exp(-1.0));
  const double i1 = p.c_minus * (a == 1.0 ? -L : -std::expm1((1.0 - a) * L) / (1.0 - a));
  // [1/e, 2]: (log u - (u-1)) nu(u-1) in d = u - 1
  auto mid = [&](double d) { return d == 0.0 ? 0.0 : log1p_minus(d) * nu_density(p, d); };
  quad::Options opt;
  opt.rel_tol = 1e-13;
  const double i2 = quad::finite(mid, std::exp(-1.0) - 1.0, 0.0, opt) + quad::finite(mid, 0.0, 1.0, opt);
  // (2, e]: only log u is active
  auto hi = [&](double u) { return std::log(u) * p.c_plus * std::pow(u - 1.0, -1.0 - a); };
  const double i3 = quad::smooth(hi, 2.0, std::exp(1.0), opt);
  // Sign of the drift term fixed against Psi*: i Psi*'(0) = -b + int_{|y|>=1} y mu.
  return p.drift_a - (i1 + i2 + i3);
}

double sigma_gamma(double alpha, double gamma, double x) {
  // e^{-(1+g)x} (e^{kx} - 1) / (1 - e^{-x})^{1+a}, k = 2g - a + 1, in log form for large x
  const double k = 2.0 * gamma - alpha + 1.0;
  if (k == 0.0) return 0.0;
  const double base = -(1.0 + gamma) * x - (1.0 + alpha) * std::log(-std::expm1(-x));
  if (k > 0.0) return std::exp(k * x + base + std::log(-std::expm1(-k * x)));
  return -std::exp(base + std::log(-std::expm1(k * x)));
}

double pv_integral_y_mu(const StableParams& p) {
  if (p.rho != 0.5) throw PreconditionError("pv_integral_y_mu: symmetric case only (rho = 1/2)");
  const double a = p.alpha;
  auto f = [&](double y) { return y * p.c_plus * sigma_gamma(a, 0.0, y); };
  quad::Options opt;
  opt.rel_tol = 1e-13;
  const double eps[3] = {1e-2, 1e-3, 1e-4};
  double I[3];
  for (int k = 0; k < 3; ++k) I[k] = quad::finite(f, eps[k], 1.0, opt);
  // I(eps) = I0 + C eps^{2-a} + D eps^{4-a}; solve the 3x3 system by Cramer.
  double M[3][3];
  for (int k = 0; k < 3; ++k) {
    M[k][0] = 1.0;
    M[k][1] = std::pow(eps[k], 2.0 - a);
    M[k][2] = std::pow(eps[k], 4.0 - a);
  }
  auto det3 = [](double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double Mx[3][3];
  for (int k = 0; k < 3; ++k) {
    Mx[k][0] = I[k];
    Mx[k][1] = M[k][1];
    Mx[k][2] = M[k][2];
  }
  return det3(Mx) / det3(M);
}

double big_jump_mean(const StableParams& p) {
  auto f = [&](double y) { return y * mu_density(p, y); };
  quad::Options opt;
  opt.rel_tol = 1e-13;
  return quad::upper_tail(f, 1.0, opt) + quad::lower_tail(f, -1.0, opt);
}

double xi_mean(const StableParams& p) { return -linear_term_b(p) + big_jump_mean(p); }

}  // namespace pssmp
