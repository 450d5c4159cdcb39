#include "pssmp/phi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "pssmp/errors.hpp"
#include "pssmp/format.hpp"

namespace pssmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (e^{eL} - 1) / e, continuous at e = 0.
double expm1_over(double e, double L) {
  const double x = e * L;
  if (std::abs(x) < 1e-4) return L * (1.0 + x / 2.0 + x * x / 6.0);
  return std::expm1(x) / e;
}

cplx expm1_over(cplx e, double L) {
  const cplx x = e * L;
  if (std::abs(x) < 1e-4) return L * (1.0 + x / 2.0 + x * x / 6.0);
  return (std::exp(x) - 1.0) / e;
}

// int_0^L v e^{ev} dv
double v_exp_integral(double e, double L) {
  const double x = e * L;
  if (std::abs(x) < 1e-4) return L * L * (0.5 + x / 3.0 + x * x / 8.0);
  return (L * std::exp(x) - std::expm1(x) / e) / e;
}

double gamma_variate(Rng& rng, double shape) {
  std::gamma_distribution<double> g(shape, 1.0);
  double v = g(rng);
  // Shapes far below 1 can underflow to 0; redraw, the event has negligible mass.
  while (!(v > 0.0)) v = g(rng);
  return v;
}

}  // namespace

cplx PhiMeasure::mellin(cplx s) const {
  if (!(s.real() < kappa0()) || !(s.real() > strip_lower())) {
    std::ostringstream os;
    os << "mellin: Re s = " << s.real() << " outside the strip (" << strip_lower() << ", "
       << kappa0() << ") for " << describe();
    throw DivergenceError(os.str());
  }
  return mellin_impl(s);
}

double PhiMeasure::density(double t) const { return std::exp(log_density(t)); }

double PhiMeasure::log_density_log(double v) const {
  const double t = std::exp(v);
  if (!(t > 0.0) || std::isinf(t)) return -kInf;
  return log_density(t);
}

// ---- PolyPhi

PolyPhi::PolyPhi(double beta, double gamma) : beta_(beta), gamma_(gamma) {
  if (!(beta > 0.0) || !(gamma > beta) || !std::isfinite(gamma))
    throw ParameterError("poly phi requires 0 < beta < gamma (beta=" + g17(beta) +
                         ", gamma=" + g17(gamma) + ")");
  log_norm_ = ln_abs_gamma(gamma) - ln_abs_gamma(beta) - ln_abs_gamma(gamma - beta);
}

cplx PolyPhi::mellin_impl(cplx s) const {
  return std::exp(ln_gamma(beta_ + s) + ln_gamma(gamma_ - beta_ - s) - ln_abs_gamma(beta_) -
                  ln_abs_gamma(gamma_ - beta_));
}

double PolyPhi::log_moment() const { return digamma(beta_) - digamma(gamma_ - beta_); }

double PolyPhi::log_density(double t) const {
  if (!(t > 0.0)) throw DomainError("density: t must be positive");
  return log_norm_ + (beta_ - 1.0) * std::log(t) - gamma_ * std::log1p(t);
}

double PolyPhi::log_density_log(double v) const {
  const double sp = v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
  return log_norm_ + (beta_ - 1.0) * v - gamma_ * sp;
}

double PolyPhi::sample(Rng& rng) const {
  // U/(1-U) with U ~ Beta(beta, gamma-beta) is G1/G2 for independent gammas.
  const double g1 = gamma_variate(rng, beta_);
  const double g2 = gamma_variate(rng, gamma_ - beta_);
  return g1 / g2;
}

std::string PolyPhi::describe() const {
  return "poly:beta=" + g17(beta_) + ",gamma=" + g17(gamma_);
}

// ---- ExpPhi

ExpPhi::ExpPhi(double a, double beta, double gamma) : a_(a), beta_(beta), gamma_(gamma) {
  if (!(a > 0.0 && beta > 0.0 && gamma > 0.0) || !std::isfinite(a * beta * gamma))
    throw ParameterError("exp phi requires a, beta, gamma > 0");
  log_norm_ = std::log(gamma) + beta / gamma * std::log(a) - ln_abs_gamma(beta / gamma);
}

double ExpPhi::kappa0() const { return kInf; }

cplx ExpPhi::mellin_impl(cplx s) const {
  return std::exp(-s / gamma_ * std::log(a_) + ln_gamma((beta_ + s) / gamma_) -
                  ln_abs_gamma(beta_ / gamma_));
}

double ExpPhi::log_moment() const { return (digamma(beta_ / gamma_) - std::log(a_)) / gamma_; }

double ExpPhi::log_density(double t) const {
  if (!(t > 0.0)) throw DomainError("density: t must be positive");
  return log_norm_ + (beta_ - 1.0) * std::log(t) - a_ * std::pow(t, gamma_);
}

double ExpPhi::log_density_log(double v) const {
  return log_norm_ + (beta_ - 1.0) * v - a_ * std::exp(gamma_ * v);
}

double ExpPhi::sample(Rng& rng) const {
  return std::pow(gamma_variate(rng, beta_ / gamma_) / a_, 1.0 / gamma_);
}

std::string ExpPhi::describe() const {
  return "exp:a=" + g17(a_) + ",beta=" + g17(beta_) + ",gamma=" + g17(gamma_);
}

// ---- DiracPhi

DiracPhi::DiracPhi(double a) : a_(a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("dirac phi requires a > 0");
}

double DiracPhi::kappa0() const { return kInf; }
double DiracPhi::strip_lower() const { return -kInf; }
cplx DiracPhi::mellin_impl(cplx s) const { return std::exp(s * std::log(a_)); }
double DiracPhi::log_moment() const { return std::log(a_); }
double DiracPhi::density(double) const { throw DomainError("dirac phi has no density"); }
double DiracPhi::log_density(double) const { throw DomainError("dirac phi has no density"); }
double DiracPhi::sample(Rng&) const { return a_; }
std::string DiracPhi::describe() const { return "dirac:a=" + g17(a_); }

// ---- TabulatedPhi

TabulatedPhi::TabulatedPhi(std::vector<double> t, std::vector<double> density, std::string label)
    : label_(std::move(label)) {
  const std::size_t n = t.size();
  if (n < 3 || density.size() != n)
    throw ParameterError("tabulated phi needs at least 3 (t, density) pairs");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !std::isfinite(t[i]) || (i > 0 && !(t[i] > t[i - 1])))
      throw ParameterError("tabulated phi: t must be positive and strictly increasing");
    if (!(density[i] > 0.0) || !std::isfinite(density[i]))
      throw ParameterError("tabulated phi: density must be positive and finite at t=" + g17(t[i]));
  }
  t_ = std::move(t);
  std::vector<double> lt(n);
  logf_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    lt[i] = std::log(t_[i]);
    logf_[i] = std::log(density[i]);
  }
  slope_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope_[i] = (logf_[i + 1] - logf_[i]) / (lt[i + 1] - lt[i]);

  // Tail exponents from the first and last decade (or the whole grid if shorter).
  const double decade = std::log(10.0);
  std::size_t j = 1;
  while (j + 1 < n && lt[j] - lt[0] < decade) ++j;
  k_lo_ = (logf_[j] - logf_[0]) / (lt[j] - lt[0]);
  j = n - 2;
  while (j > 0 && lt[n - 1] - lt[j] < decade) --j;
  k_hi_ = (logf_[n - 1] - logf_[j]) / (lt[n - 1] - lt[j]);
  // Exponents this close to -1 leave essentially all mass outside the grid.
  if (!(k_lo_ > -1.0 + 1e-3))
    throw DivergenceError("tabulated phi not normalizable at 0 (tail exponent " + g17(k_lo_) + ")");
  if (!(k_hi_ < -1.0 - 1e-3))
    throw DivergenceError("tabulated phi not normalizable at infinity (tail exponent " +
                          g17(k_hi_) + ")");

  // Unnormalized masses: tails and cells.
  std::vector<double> mass(n + 1);
  mass[0] = std::exp(logf_[0] + lt[0]) / (k_lo_ + 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    mass[i + 1] = std::exp(logf_[i] + lt[i]) * expm1_over(slope_[i] + 1.0, lt[i + 1] - lt[i]);
  mass[n] = -std::exp(logf_[n - 1] + lt[n - 1]) / (k_hi_ + 1.0);
  double Z = 0.0;
  for (double m : mass) Z += m;
  const double logZ = std::log(Z);
  for (double& v : logf_) v -= logZ;
  cum_.assign(n + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    acc += mass[i] / Z;
    cum_[i] = acc;
  }

  // Log-moment, exact for the interpolant.
  double lm = 0.0;
  {
    const double e = k_lo_ + 1.0;
    lm += std::exp(logf_[0] + lt[0]) * (lt[0] / e - 1.0 / (e * e));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double e = slope_[i] + 1.0, L = lt[i + 1] - lt[i];
    lm += std::exp(logf_[i] + lt[i]) * (lt[i] * expm1_over(e, L) + v_exp_integral(e, L));
  }
  {
    const double e = k_hi_ + 1.0;
    lm += std::exp(logf_[n - 1] + lt[n - 1]) * (-lt[n - 1] / e + 1.0 / (e * e));
  }
  log_moment_ = lm;
}

double TabulatedPhi::log_density(double t) const {
  if (!(t > 0.0)) throw DomainError("density: t must be positive");
  const std::size_t n = t_.size();
  const double l = std::log(t);
  if (t <= t_[0]) return logf_[0] + k_lo_ * (l - std::log(t_[0]));
  if (t >= t_[n - 1]) return logf_[n - 1] + k_hi_ * (l - std::log(t_[n - 1]));
  const std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin() - 1;
  return logf_[i] + slope_[i] * (l - std::log(t_[i]));
}

double TabulatedPhi::log_density_log(double v) const {
  const std::size_t n = t_.size();
  const double l0 = std::log(t_[0]), lN = std::log(t_[n - 1]);
  if (v <= l0) return logf_[0] + k_lo_ * (v - l0);
  if (v >= lN) return logf_[n - 1] + k_hi_ * (v - lN);
  return log_density(std::exp(v));
}

cplx TabulatedPhi::mellin_impl(cplx s) const {
  const std::size_t n = t_.size();
  const double l0 = std::log(t_[0]), lN = std::log(t_[n - 1]);
  cplx acc = std::exp(logf_[0] + (s + 1.0) * l0) / (s + k_lo_ + 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double li = std::log(t_[i]);
    acc += std::exp(logf_[i] + (s + 1.0) * li) *
           expm1_over(s + slope_[i] + 1.0, std::log(t_[i + 1]) - li);
  }
  acc -= std::exp(logf_[n - 1] + (s + 1.0) * lN) / (s + k_hi_ + 1.0);
  return acc;
}

double TabulatedPhi::inverse_cdf(double m) const {
  const std::size_t n = t_.size();
  if (m <= cum_[0]) {
    const double e = k_lo_ + 1.0;
    const double ft = std::exp(logf_[0]) * t_[0];
    return t_[0] * std::pow(m * e / ft, 1.0 / e);
  }
  if (m >= cum_[n - 1]) {
    const double e = k_hi_ + 1.0;
    const double ft = std::exp(logf_[n - 1]) * t_[n - 1];
    const double r = std::max(e * (m - cum_[n - 1]) / ft, -1.0 + 1e-300);
    return t_[n - 1] * std::exp(std::log1p(r) / e);
  }
  // cell i spans cumulative mass (cum_[i], cum_[i+1]]
  const std::size_t i = std::lower_bound(cum_.begin(), cum_.end(), m) - cum_.begin() - 1;
  const double e = slope_[i] + 1.0;
  const double r = (m - cum_[i]) / (std::exp(logf_[i]) * t_[i]);
  const double ell = std::abs(e * r) < 1e-12 ? r : std::log1p(e * r) / e;
  return std::min(t_[i] * std::exp(ell), t_[i + 1]);
}

double TabulatedPhi::sample(Rng& rng) const { return inverse_cdf(uniform_open(rng)); }

bool TabulatedPhi::charges_above_one() const { return true; }

// ---- symmetry

SymmetryResult is_symmetric(const PhiMeasure& phi, double alpha, double tol) {
  if (auto a = phi.atom()) {
    const bool sym = std::abs(*a - 1.0) <= 1e-12;
    return {sym, sym ? 0.0 : 1.0, "atom"};
  }
  double worst = 0.0;
  const int n = 800;
  for (int k = 0; k <= n; ++k) {
    const double lt = std::log(10.0) * (-4.0 + 8.0 * k / n);
    const double t = std::exp(lt);
    const double d = phi.log_density(1.0 / t) - (1.0 + alpha) * lt - phi.log_density(t);
    const double r = std::isfinite(d) ? std::tanh(std::abs(d) / 2.0) : 1.0;
    worst = std::max(worst, r);
  }
  if (auto* p = dynamic_cast<const PolyPhi*>(&phi)) {
    const double target = alpha + 2.0 * p->beta() - 1.0;
    const bool sym = std::abs(p->gamma() - target) <= 1e-12 * std::max(1.0, std::abs(target));
    return {sym, worst, "closed-form"};
  }
  return {worst <= tol, worst, "grid"};
}

std::shared_ptr<TabulatedPhi> from_generator(const std::function<double(double)>& f, double alpha,
                                             int points_per_decade) {
  if (points_per_decade < 2) throw ParameterError("from_generator: points_per_decade >= 2");
  const int n = 12 * points_per_decade;
  std::vector<double> t(n + 1), d(n + 1);
  for (int k = 0; k <= n; ++k) {
    // -6 + x and 6 - x are exact negatives, so the grid is symmetric in log t
    const double lt = std::log(10.0) * (-6.0 + 12.0 * k / n);
    t[k] = std::exp(lt);
    const double s = t[k] + 1.0 / t[k];
    const double fv = f(s);
    if (!(fv > 0.0) || !std::isfinite(fv))
      throw ParameterError("from_generator: f must be positive and finite on the grid (s=" +
                           g17(s) + ")");
    d[k] = std::exp(std::log(fv) - (1.0 + alpha) * std::log1p(t[k]));
  }
  return std::make_shared<TabulatedPhi>(std::move(t), std::move(d), "generator");
}

// ---- families and parsing

PhiPtr trace_phi(double alpha, double rho) {
  return std::make_shared<PolyPhi>(1.0 - alpha * rho, 1.0);
}

PhiPtr restart_phi(double alpha) { return std::make_shared<PolyPhi>(1.0, 1.0 + alpha); }

PhiPtr symmetric_poly_phi(double alpha, double beta) {
  if (!(beta > 1.0 - alpha))
    throw ParameterError("symmetric poly phi requires beta > 1 - alpha");
  return std::make_shared<PolyPhi>(beta, alpha + 2.0 * beta - 1.0);
}

std::shared_ptr<TabulatedPhi> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open phi table: " + path);
  std::vector<double> t, d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a >> b)) {
      if (t.empty()) continue;  // header
      throw ParameterError("malformed phi table line: " + line);
    }
    t.push_back(a);
    d.push_back(b);
  }
  return std::make_shared<TabulatedPhi>(std::move(t), std::move(d), "table:path=" + path);
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body, const std::string& spec) {
  std::map<std::string, std::string> kv;
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParameterError("malformed phi spec '" + spec + "': expected key=value");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double num(const std::map<std::string, std::string>& kv, const std::string& key,
           const std::string& spec) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParameterError("phi spec '" + spec + "' is missing " + key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size())
    throw ParameterError("phi spec '" + spec + "': " + key + " is not a number");
  return v;
}

void only(const std::map<std::string, std::string>& kv, std::initializer_list<const char*> keys,
          const std::string& spec) {
  for (const auto& [k, v] : kv) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
      throw ParameterError("phi spec '" + spec + "': unknown key " + k);
  }
}

}  // namespace

PhiPtr parse_phi(const std::string& spec, double alpha, double rho) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "table") {
    if (body.rfind("path=", 0) != 0) throw ParameterError("table phi needs path=FILE");
    return load_table(body.substr(5));
  }
  const auto kv = parse_kv(body, spec);
  if (kind == "poly") {
    only(kv, {"beta", "gamma"}, spec);
    return std::make_shared<PolyPhi>(num(kv, "beta", spec), num(kv, "gamma", spec));
  }
  if (kind == "exp") {
    only(kv, {"a", "beta", "gamma"}, spec);
    return std::make_shared<ExpPhi>(num(kv, "a", spec), num(kv, "beta", spec),
                                    num(kv, "gamma", spec));
  }
  if (kind == "dirac") {
    only(kv, {"a"}, spec);
    return std::make_shared<DiracPhi>(num(kv, "a", spec));
  }
  if (kind == "trace") {
    only(kv, {}, spec);
    return trace_phi(alpha, rho);
  }
  if (kind == "restart") {
    only(kv, {}, spec);
    return restart_phi(alpha);
  }
  if (kind == "sym") {
    only(kv, {"beta"}, spec);
    return symmetric_poly_phi(alpha, num(kv, "beta", spec));
  }
  throw ParameterError("unknown phi family '" + kind + "'");
}

bool phi_spec_coupled(const std::string& spec) {
  const std::string kind = spec.substr(0, spec.find(':'));
  return kind == "trace" || kind == "restart" || kind == "sym";
}

}  // namespace pssmp
