#include "pssmp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pssmp/errors.hpp"
#include "pssmp/quad.hpp"

namespace pssmp {

namespace {

double softplus(double w) { return w > 0.0 ? w + std::log1p(std::exp(-w)) : std::log1p(std::exp(w)); }

// Integrands with mass around two centres c1, c2 and exponential monotone
// behaviour in between: unit shoulders around each centre, one piece across the gap.
double two_centre_line(const quad::Fn& g, double c1, double c2) {
  const double lo = std::min(c1, c2), hi = std::max(c1, c2);
  // centres closer than this would leave a sliver piece the rule cannot resolve
  if (hi - lo < 1e-6) return quad::line(g, {0.5 * (lo + hi)});
  if (hi - lo <= 8.0) return quad::line(g, {lo, hi});
  return quad::line(g, {lo - 1.0, lo, lo + 1.0, hi - 1.0, hi, hi + 1.0}, 1e300);
}

}  // namespace

ResurrectionKernel::ResurrectionKernel(StableParams p, PhiPtr phi) : p_(p), phi_(std::move(phi)) {
  if (!phi_) throw ParameterError("resurrection kernel: phi is null");
}

// c_- int exp(-(1+alpha)(log x + softplus(v0 - v))) phi(e^v) dv, t = e^v, v0 = log(y/x).
namespace {

double log_phi_at(const PhiMeasure& phi, double v) { return phi.log_density_log(v); }

}  // namespace

double ResurrectionKernel::q_integral(double logx, double v0, double shift) const {
  const double a = p_.alpha;
  if (auto at = phi_->atom()) {
    const double v = std::log(*at);
    return p_.c_minus * std::exp(shift - (1.0 + a) * (logx + softplus(v0 - v)) - v);
  }
  auto g = [&](double v) {
    return std::exp(shift - (1.0 + a) * (logx + softplus(v0 - v)) + log_phi_at(*phi_, v));
  };
  if (auto* tab = dynamic_cast<const TabulatedPhi*>(phi_.get())) {
    std::vector<double> nodes;
    nodes.reserve(tab->grid().size());
    for (double t : tab->grid()) nodes.push_back(std::log(t));
    return p_.c_minus * (quad::lower_tail(g, nodes.front()) + quad::cells(g, nodes) +
                         quad::upper_tail(g, nodes.back()));
  }
  return p_.c_minus * two_centre_line(g, v0, 0.0);
}

double ResurrectionKernel::q_density(double x, double y) const {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("q_density: x, y must be positive");
  return q_integral(std::log(x), std::log(y) - std::log(x));
}

double ResurrectionKernel::q_mass(double x) const {
  if (!(x > 0.0)) throw DomainError("q_mass: x must be positive");
  return p_.c_minus / p_.alpha * std::pow(x, -p_.alpha);
}

double ResurrectionKernel::pi_density(double y) const {
  // q(1, e^y) e^y; the factor e^y is folded into the exponent
  return q_integral(0.0, y, y);
}

double ResurrectionKernel::pi_density_alt(double y) const {
  return q_integral(-y, y, -p_.alpha * y);
}

double ResurrectionKernel::Pi_density(double y) const {
  const double a = p_.alpha;
  auto logf = [a](double w) { return std::log(a) + w - (1.0 + a) * softplus(w); };
  if (auto at = phi_->atom()) return std::exp(logf(y - std::log(*at)));
  auto g = [&](double v) { return std::exp(logf(y - v) + log_phi_at(*phi_, v) + v); };
  if (auto* tab = dynamic_cast<const TabulatedPhi*>(phi_.get())) {
    std::vector<double> nodes;
    for (double t : tab->grid()) nodes.push_back(std::log(t));
    return quad::lower_tail(g, nodes.front()) + quad::cells(g, nodes) +
           quad::upper_tail(g, nodes.back());
  }
  return two_centre_line(g, y, 0.0);
}

double ResurrectionKernel::Pi_density_hyp(double y) const {
  auto* poly = dynamic_cast<const PolyPhi*>(phi_.get());
  if (!poly) throw PreconditionError("Pi_density_hyp: closed form needs a poly phi");
  const double a = p_.alpha, b = poly->beta(), g = poly->gamma();
  const double lead = std::log(a) + ln_abs_gamma(g) + ln_abs_gamma(1.0 + g - b) +
                      ln_abs_gamma(a + b) - ln_abs_gamma(1.0 + a + g) - ln_abs_gamma(b) -
                      ln_abs_gamma(g - b);
  // z = 1 - e^{-y}, passed through its complement e^{-y}
  const double F = gauss_2f1_complement(g, 1.0 + g - b, 1.0 + a + g, std::exp(-y));
  return std::exp(lead - (g - b) * y) * F;
}

cplx ResurrectionKernel::pi_hat(double theta) const {
  const cplx it(0.0, theta);
  const double a = p_.alpha;
  return p_.c_minus / a *
         std::exp(ln_gamma(a - it) + ln_gamma(1.0 + it) - ln_abs_gamma(a)) * phi_->mellin(it);
}

double ResurrectionKernel::j_density(double x, double y) const {
  if (x == y) throw DomainError("j_density: x = y");
  return nu_density(p_, y - x);
}

double ResurrectionKernel::J_density(double x, double y) const {
  if (x == y) throw DomainError("J_density: x = y");
  return j_density(x, y) + q_density(x, y);
}

double ResurrectionKernel::boundary_factor(double x, double y) const {
  if (x == y) return 1.0;
  return 1.0 + q_density(x, y) / j_density(x, y);
}

double near_diagonal_constant(const ResurrectionKernel& k, int n) {
  const double a = k.params().alpha;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::pow(10.0, -3.0 + 6.0 * i / (n - 1));
    for (int j = 1; j <= 8; ++j) {
      const double r = 0.25 * std::pow(10.0, -3.0 * (j - 1) / 7.0);
      for (double y : {x * (1.0 + r), x / (1.0 + r)}) {
        const double s = std::abs(x - y) / std::min(x, y);
        worst = std::max(worst, std::abs(k.boundary_factor(x, y) - 1.0) / std::pow(s, 1.0 + a));
      }
    }
  }
  return worst;
}

}  // namespace pssmp
