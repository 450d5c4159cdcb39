#include "pssmp/classify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pssmp/errors.hpp"
#include "pssmp/quad.hpp"
#include "pssmp/roots.hpp"

namespace pssmp {

namespace {

constexpr double kPi = std::numbers::pi;

int sign_of(double v, double tol) { return std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1); }

void require_log_moment(const PhiMeasure& phi) {
  if (!phi.has_finite_abs_log_moment())
    throw PreconditionError("phi has infinite |log|-moment; E|chi_1| is infinite and the mean "
                            "of xi-bar is undefined");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::infinite_absorption: return "infinite_absorption";
    case Verdict::finite_absorption_continuous: return "finite_absorption_continuous";
    case Verdict::boundary_zero_mean: return "boundary_zero_mean";
  }
  return "?";
}

std::string to_string(RegionSign s) {
  switch (s) {
    case RegionSign::negative: return "negative";
    case RegionSign::zero: return "zero";
    case RegionSign::positive: return "positive";
    case RegionSign::undetermined: return "undetermined";
  }
  return "?";
}

cplx overline_psi(const StableParams& p, const PhiMeasure& phi, double theta) {
  const cplx it(0.0, theta);
  const double a = p.alpha, ar = a * p.rho_hat;
  const cplx g = std::exp(ln_gamma(a - it) + ln_gamma(1.0 + it)) / kPi;
  return g * (std::sin(kPi * (ar - it)) - std::sin(kPi * ar) * phi.mellin(it));
}

cplx overline_psi_direct(const StableParams& p, const PhiMeasure& phi, double theta) {
  const cplx it(0.0, theta);
  const double a = p.alpha;
  const cplx pi_hat = p.c_minus / a * std::exp(ln_gamma(a - it) + ln_gamma(1.0 + it) -
                                               ln_abs_gamma(a)) * phi.mellin(it);
  return psi_star(p, theta) - pi_hat;
}

double h_function(const StableParams& p, const PhiMeasure& phi, double kappa) {
  if (!(kappa < phi.kappa0())) return -std::numeric_limits<double>::infinity();
  const double ar = p.alpha * p.rho_hat;
  return std::sin(kPi * (ar - kappa)) - std::sin(kPi * ar) * phi.mellin(cplx(kappa, 0.0)).real();
}

double overline_psi_imag(const StableParams& p, const PhiMeasure& phi, double kappa) {
  return std::exp(ln_abs_gamma(p.alpha - kappa) + ln_abs_gamma(1.0 + kappa)) / kPi *
         h_function(p, phi, kappa);
}

double mean_xi1(const StableParams& p, const PhiMeasure& phi) {
  require_log_moment(phi);
  const double ar = p.alpha * p.rho_hat;
  return std::tgamma(p.alpha) * (std::cos(kPi * ar) + std::sin(kPi * ar) * phi.log_moment() / kPi);
}

double mean_xi1_fd(const StableParams& p, const PhiMeasure& phi, double h) {
  // g(k) = Psi-bar(-ik) is real and E xi-bar_1 = -g'(0)
  return -(overline_psi_imag(p, phi, h) - overline_psi_imag(p, phi, -h)) / (2.0 * h);
}

ClassificationReport classify(const StableParams& p, const PhiMeasure& phi, double zero_tol) {
  ClassificationReport r;
  r.alpha = p.alpha;
  r.rho = p.rho;
  r.phi = phi.describe();
  r.mean_xi1 = mean_xi1(p, phi);
  if (std::abs(r.mean_xi1) <= zero_tol)
    r.verdict = Verdict::boundary_zero_mean;
  else
    r.verdict = r.mean_xi1 > 0 ? Verdict::infinite_absorption : Verdict::finite_absorption_continuous;
  r.absorption_infinite = r.verdict != Verdict::finite_absorption_continuous;
  const double L = -phi.log_moment();
  r.a_phi = arccot(L / kPi) / kPi;
  r.rho_critical = 1.0 - r.a_phi / p.alpha;
  r.rho_critical_admissible = admissible(p.alpha, r.rho_critical);
  if (r.verdict == Verdict::finite_absorption_continuous && phi.kappa0() > 0.0) {
    try {
      r.kappa_star = recurrent_extension_kappa(p, phi);
    } catch (const std::exception&) {
      r.kappa_star.reset();
    }
  }
  return r;
}

CurveInfo a_phi_and_curve(const PhiMeasure& phi) {
  require_log_moment(phi);
  const double L = -phi.log_moment();
  CurveInfo c{};
  c.a_phi = arccot(L / kPi) / kPi;
  c.a_phi_alt = arccot(-L / kPi) / kPi;
  c.alpha_lower = c.a_phi;
  c.alpha_upper = 1.0 + c.a_phi;
  return c;
}

double restart_log_moment(double alpha) { return digamma(1.0) - digamma(alpha); }
double censored_log_moment(double alpha) { return digamma(alpha) - digamma(1.0); }

CriticalAlphas critical_alphas(const std::function<double(double)>& m) {
  CriticalAlphas out{};
  auto upper = [&](double a) { return kPi / std::tan(kPi * (a - 1.0)) + m(a); };
  out.alpha_upper = brent(upper, 1.0 + 1e-9, 2.0 - 1e-9, 1e-15).x;
  out.rho_star = 1.0 / out.alpha_upper;
  auto lower = [&](double a) { return a * kPi - arccot(-m(a) / kPi); };
  try {
    out.alpha_lower = brent(lower, 1e-6, 1.0 - 1e-12, 1e-15).x;
  } catch (const BracketError&) {
    out.alpha_lower.reset();
  }
  return out;
}

double censored_mean(const StableParams& p) {
  const double ar = p.alpha * p.rho_hat;
  return std::tgamma(p.alpha) *
         (std::cos(kPi * ar) + std::sin(kPi * ar) * censored_log_moment(p.alpha) / kPi);
}

double recurrent_extension_kappa(const StableParams& p, const PhiMeasure& phi) {
  require_log_moment(phi);
  const double m = mean_xi1(p, phi);
  if (!(m < 0.0))
    throw PreconditionError("recurrent extension needs E xi-bar_1 < 0 (got " + std::to_string(m) +
                            ")");
  if (!(phi.kappa0() > 0.0)) throw PreconditionError("recurrent extension needs kappa0 > 0");
  const double lo = 1e-8;
  const double hi = std::min(p.alpha, phi.kappa0()) - 1e-8;
  auto h = [&](double k) { return h_function(p, phi, k); };
  const RootResult r = brent(h, lo, hi, 1e-16);
  if (!(std::abs(r.fx) <= 1e-10))
    throw NumericError("recurrent extension root residual too large: " + std::to_string(r.fx));
  return r.x;
}

SymmetricRegionResult symmetric_region(const StableParams& p, const PhiMeasure& phi) {
  if (!is_symmetric(phi, p.alpha).symmetric)
    throw PreconditionError("symmetric_region: phi does not give a symmetric kernel");
  const double a = p.alpha, rh = p.rho_hat, thr = 1.0 / (2.0 * a);
  const bool on_thr = std::abs(rh - thr) <= 1e-12;
  RegionSign s = RegionSign::undetermined;
  if (a == 1.0 && rh == 0.5)
    s = RegionSign::zero;
  else if (a > 1.0 && rh >= thr - 1e-12)
    s = on_thr && !phi.charges_above_one() ? RegionSign::zero : RegionSign::negative;
  else if (a < 1.0 && rh <= thr + 1e-12)
    s = on_thr && !phi.charges_above_one() ? RegionSign::zero : RegionSign::positive;
  SymmetricRegionResult r{s, mean_xi1(p, phi), true};
  switch (s) {
    case RegionSign::negative: r.consistent = r.mean < 0; break;
    case RegionSign::zero: r.consistent = std::abs(r.mean) <= 1e-10; break;
    case RegionSign::positive: r.consistent = r.mean > 0; break;
    case RegionSign::undetermined: break;
  }
  return r;
}

namespace {

ModifiedMeanResult finish(double sig, double quad_v, int pred) {
  ModifiedMeanResult r{sig, quad_v, pred, false};
  if (pred == 0)
    r.agree = std::abs(sig) < 1e-10 && std::abs(quad_v) < 1e-6;
  else
    r.agree = sign_of(sig, 0.0) == pred && sign_of(quad_v, 0.0) == pred;
  return r;
}

// B1 takes e^y; past this the integrands are below e^{-alpha kExpMax} anyway.
constexpr double kExpMax = 700.0;

// -b + int_{-1}^{1} y (B-1) mu + int_{|y|>=1} y B mu, all with c = 1.
double quadrature_mean(double alpha, const std::function<double(double)>& Bm1) {
  const StableParams p = validate(alpha, 0.5);
  const double c = p.c_plus;
  // B is only evaluated where mu has not underflowed
  auto inner = [&](double y) {
    const double m = y == 0.0 ? 0.0 : mu_density(p, y) / c;
    return m == 0.0 ? 0.0 : y * Bm1(y) * m;
  };
  auto outer = [&](double y) {
    const double m = mu_density(p, y) / c;
    return m == 0.0 || std::abs(y) > kExpMax ? 0.0 : y * (1.0 + Bm1(y)) * m;
  };
  quad::Options opt;
  opt.rel_tol = 1e-12;
  const double b1 = linear_term_b(p) / c;
  return -b1 + quad::finite(inner, -1.0, 0.0, opt) + quad::finite(inner, 0.0, 1.0, opt) +
         quad::lower_tail(outer, -1.0, opt) + quad::upper_tail(outer, 1.0, opt);
}

double sigma_mean(double alpha, double gamma, const std::function<double(double)>& Bm1) {
  auto f = [&](double y) {
    const double s = y == 0.0 ? 0.0 : sigma_gamma(alpha, gamma, y);
    return s == 0.0 || y > kExpMax ? 0.0 : y * s * (1.0 + Bm1(y));
  };
  quad::Options opt;
  opt.rel_tol = 1e-12;
  return quad::finite(f, 0.0, 1.0, opt) + quad::upper_tail(f, 1.0, opt);
}

}  // namespace

ModifiedMeanResult modified_kernel_mean_power(double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0,2)");
  if (!(gamma > -1.0 && gamma < alpha))
    throw ParameterError("power boundary factor needs gamma in (-1, alpha)");
  auto zero = [](double) { return 0.0; };
  const double sig = sigma_mean(alpha, gamma, zero);
  const double q = quadrature_mean(alpha, [gamma](double y) { return std::expm1(gamma * y); });
  return finish(sig, q, sign_of(1.0 + 2.0 * gamma - alpha, 1e-14));
}

ModifiedMeanResult modified_kernel_mean_symmetric(double alpha,
                                                  const std::function<double(double)>& Bm1) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0,2)");
  const double sig = sigma_mean(alpha, 0.0, Bm1);
  const double q = quadrature_mean(alpha, Bm1);
  return finish(sig, q, sign_of(1.0 - alpha, 0.0));
}

std::vector<RegionCell> region_grid(const PhiFactory& phi_at, int n, int m, bool parallel,
                                    double zero_tol) {
  if (n < 1 || m < 1) throw ParameterError("region grid needs positive dimensions");
  std::vector<RegionCell> cells(static_cast<std::size_t>(n) * m);
  std::vector<std::string> errors(cells.size());
  const long total = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (long k = 0; k < total; ++k) {
    const int i = static_cast<int>(k / m), j = static_cast<int>(k % m);
    RegionCell c{2.0 * (i + 1) / (n + 1), (j + 1.0) / (m + 1), false, 0,
                 std::numeric_limits<double>::quiet_NaN()};
    if (admissible(c.alpha, c.rho)) {
      try {
        const StableParams p = validate(c.alpha, c.rho);
        const PhiPtr phi = phi_at(c.alpha, c.rho);
        c.mean = mean_xi1(p, *phi);
        c.sign = sign_of(c.mean, zero_tol);
        c.admissible = true;
      } catch (const ParameterError&) {
        // family undefined at this point; reported as NA
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
    cells[k] = c;
  }
  for (const auto& e : errors)
    if (!e.empty()) throw NumericError("region grid: " + e);
  return cells;
}

std::vector<CurvePoint> critical_curve(const PhiFactory& phi_at, const std::vector<double>& alphas) {
  std::vector<CurvePoint> out;
  for (double a : alphas) {
    if (!(a > 0.0 && a < 2.0)) continue;
    auto mean_at = [&](double r) { return mean_xi1(validate(a, r), *phi_at(a, r)); };
    if (a == 1.0) {
      if (std::abs(mean_at(0.5)) <= 1e-12) out.push_back({a, 0.5});
      continue;
    }
    const double lo = a < 1.0 ? 1e-9 : 1.0 - 1.0 / a + 1e-9;
    const double hi = a < 1.0 ? 1.0 - 1e-9 : 1.0 / a - 1e-9;
    try {
      out.push_back({a, brent(mean_at, lo, hi, 1e-14).x});
    } catch (const BracketError&) {
      // no zero crossing at this alpha
    }
  }
  return out;
}

}  // namespace pssmp
