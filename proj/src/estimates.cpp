#include "pssmp/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pssmp/errors.hpp"
#include "pssmp/quad.hpp"

namespace pssmp {

namespace {

constexpr double kBand = 5.0;
constexpr double kSame = 1e-12;

bool lower_kind(ScalingKind k) { return k == ScalingKind::L_zero || k == ScalingKind::L_inf; }
bool at_zero(ScalingKind k) { return k == ScalingKind::L_zero || k == ScalingKind::U_zero; }

// (log r)^{1+d}, log log r or 1, for the critical branches of the log-power table
double critical_log(double r, double d) {
  if (d > -1.0 + kSame) return std::pow(std::log(r), 1.0 + d);
  if (d >= -1.0 - kSame) return std::log(std::log(r));
  return 1.0;
}

std::string critical_log_name(double d, const char* var) {
  if (d > -1.0 + kSame) return std::string("log(r)^(1+") + var + ")";
  if (d >= -1.0 - kSame) return "log(log(r))";
  return "1";
}

quad::Options loose() {
  quad::Options o;
  o.rel_tol = 1e-9;
  o.rel_fail = 1e-5;
  return o;
}

}  // namespace

std::string to_string(ScalingKind k) {
  switch (k) {
    case ScalingKind::L_zero: return "L1";
    case ScalingKind::U_zero: return "U1";
    case ScalingKind::L_inf: return "L^1";
    case ScalingKind::U_inf: return "U^1";
  }
  return "?";
}

std::string to_string(EnvelopeFamily f) {
  switch (f) {
    case EnvelopeFamily::log_power: return "log_power";
    case EnvelopeFamily::exponential: return "exponential";
    case EnvelopeFamily::compact: return "compact";
    case EnvelopeFamily::integral: return "integral";
  }
  return "?";
}

ScalingCertificate check_weak_scaling(const std::function<double(double)>& log_g, ScalingKind kind,
                                      double exponent, double budget, int n) {
  if (n < 2) throw ParameterError("weak scaling grid needs at least 2 points");
  const double lo = at_zero(kind) ? -6.0 : 0.0;
  // at zero the grid stays strictly below 1
  const double span = 6.0;
  std::vector<double> t(n), lg(n);
  for (int i = 0; i < n; ++i) {
    const double e = at_zero(kind) ? lo + span * i / n : lo + span * i / (n - 1);
    t[i] = std::pow(10.0, e);
    lg[i] = log_g(t[i]);
    if (!std::isfinite(lg[i]))
      throw PreconditionError("weak scaling: g must be strictly positive on the tested range");
  }
  const bool lower = lower_kind(kind);
  double best = lower ? std::numeric_limits<double>::infinity() : 0.0;
  int bi = 0, bj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = lg[j] - lg[i] - exponent * std::log(t[j] / t[i]);
      if (lower ? v < best : v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  ScalingCertificate c{kind, exponent, std::exp(best), false, t[bi], t[bj]};
  c.pass = lower ? c.constant >= 1.0 / budget : c.constant <= budget;
  return c;
}

Envelope Envelope::log_power(double alpha, double beta, double gamma, double dp, double dm) {
  if (!(beta >= 0.0 && gamma >= beta)) throw ParameterError("log-power envelope needs 0 <= beta <= gamma");
  Envelope e;
  e.family_ = EnvelopeFamily::log_power;
  e.alpha_ = alpha;
  e.beta_ = beta;
  e.gamma_ = gamma;
  e.dp_ = dp;
  e.dm_ = dm;
  e.norm_up_ = e.raw_up(kBand);
  e.norm_down_ = e.raw_down(kBand);
  return e;
}

Envelope Envelope::exponential(double alpha, double beta) {
  if (!(beta > 0.0)) throw ParameterError("exponential envelope needs beta > 0");
  Envelope e;
  e.family_ = EnvelopeFamily::exponential;
  e.alpha_ = alpha;
  e.beta_ = beta;
  e.norm_up_ = e.raw_up(kBand);
  e.norm_down_ = e.raw_down(kBand);
  return e;
}

Envelope Envelope::compact(double alpha) {
  Envelope e;
  e.family_ = EnvelopeFamily::compact;
  e.alpha_ = alpha;
  return e;
}

Envelope Envelope::integral(double alpha, PhiPtr phi) {
  if (phi->atom()) throw PreconditionError("integral envelope needs a phi with a density");
  Envelope e;
  e.family_ = EnvelopeFamily::integral;
  e.alpha_ = alpha;
  e.phi_ = std::move(phi);
  e.norm_up_ = e.raw_up(kBand);
  e.norm_down_ = e.raw_down(kBand);
  return e;
}

Envelope Envelope::for_phi(double alpha, const PhiPtr& phi) {
  if (auto* p = dynamic_cast<const PolyPhi*>(phi.get()))
    return log_power(alpha, p->beta(), p->gamma());
  if (auto* p = dynamic_cast<const ExpPhi*>(phi.get())) return exponential(alpha, p->beta());
  if (phi->atom()) return compact(alpha);
  return integral(alpha, phi);
}

double Envelope::raw_down(double r) const {
  switch (family_) {
    case EnvelopeFamily::log_power:
      if (beta_ < 1.0 - kSame) return std::pow(r, 1.0 - beta_) * std::pow(std::log(r), dm_);
      if (beta_ <= 1.0 + kSame) return critical_log(r, dm_);
      return 1.0;
    case EnvelopeFamily::exponential:
      if (beta_ < 1.0 - kSame) return std::pow(r, 1.0 - beta_);
      if (beta_ <= 1.0 + kSame) return std::log(r);
      return 1.0;
    case EnvelopeFamily::integral: {
      auto f = [this](double s) { return std::exp(phi_->log_density_log(s)); };
      return quad::smooth(f, -std::log(r - 1.0), 0.0, loose());
    }
    case EnvelopeFamily::compact: break;
  }
  return 1.0;
}

double Envelope::raw_up(double r) const {
  switch (family_) {
    case EnvelopeFamily::log_power: {
      const double k = gamma_ - beta_;
      if (k < alpha_ - kSame)
        return std::pow(r, alpha_ + beta_ - gamma_) * std::pow(std::log(r), dp_);
      if (k <= alpha_ + kSame) return critical_log(r, dp_);
      return 1.0;
    }
    case EnvelopeFamily::integral: {
      auto f = [this](double s) {
        return std::exp((1.0 + alpha_) * s + phi_->log_density_log(s));
      };
      return quad::smooth(f, 0.0, std::log(r - 1.0), loose());
    }
    case EnvelopeFamily::exponential:
    case EnvelopeFamily::compact: break;
  }
  return 1.0;
}

double Envelope::factor_up(double r) const { return raw_up(r) / norm_up_; }
double Envelope::factor_down(double r) const { return raw_down(r) / norm_down_; }

double Envelope::operator()(double x, double y) const {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("envelope: x, y must be positive");
  const double hi = std::max(x, y), lo = std::min(x, y), r = hi / lo;
  const double base = std::pow(hi, -1.0 - alpha_);
  if (r <= kBand) return base;
  if (family_ == EnvelopeFamily::compact) return std::pow(1.25 * (hi - lo), -1.0 - alpha_);
  return base * (x < y ? factor_up(r) : factor_down(r));
}

std::string Envelope::branch_up() const {
  switch (family_) {
    case EnvelopeFamily::log_power: {
      const double k = gamma_ - beta_;
      if (k < alpha_ - kSame) return "r^(alpha+beta-gamma) log(r)^(delta+)";
      if (k <= alpha_ + kSame) return critical_log_name(dp_, "delta+");
      return "1";
    }
    case EnvelopeFamily::exponential: return "1";
    case EnvelopeFamily::compact: return "|x-y|^(-1-alpha)";
    case EnvelopeFamily::integral: return "int_1^(r-1) t^alpha phi(t) dt";
  }
  return "?";
}

std::string Envelope::branch_down() const {
  switch (family_) {
    case EnvelopeFamily::log_power:
      if (beta_ < 1.0 - kSame) return "r^(1-beta) log(r)^(delta-)";
      if (beta_ <= 1.0 + kSame) return critical_log_name(dm_, "delta-");
      return "1";
    case EnvelopeFamily::exponential:
      if (beta_ < 1.0 - kSame) return "r^(1-beta)";
      if (beta_ <= 1.0 + kSame) return "log(r)";
      return "1";
    case EnvelopeFamily::compact: return "|x-y|^(-1-alpha)";
    case EnvelopeFamily::integral: return "int_(1/(r-1))^1 phi(t) dt/t";
  }
  return "?";
}

namespace {

// Shared sweep: ratio(k) for k = 0..n-1, reduced in index order.
ComparabilityResult sweep(int n, const std::function<double(int)>& abscissa,
                          const std::function<double(double)>& ratio,
                          const std::function<bool(double)>& on_band,
                          const ComparabilityOptions& opt) {
  std::vector<double> xs(n), rs(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic, 8) if (opt.parallel)
  for (int k = 0; k < n; ++k) {
    xs[k] = abscissa(k);
    try {
      rs[k] = ratio(xs[k]);
      if (!(rs[k] > 0.0) || !std::isfinite(rs[k]))
        errors[k] = "non-positive or non-finite ratio";
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (int k = 0; k < n; ++k)
    if (!errors[k].empty())
      throw NumericError("comparability sweep at " + std::to_string(xs[k]) + ": " + errors[k]);
  ComparabilityResult r{};
  r.ratio_min = r.near_min = std::numeric_limits<double>::infinity();
  r.ratio_max = r.near_max = 0.0;
  r.points = n;
  for (int k = 0; k < n; ++k) {
    if (rs[k] < r.ratio_min) r.ratio_min = rs[k], r.x_at_min = xs[k];
    if (rs[k] > r.ratio_max) r.ratio_max = rs[k], r.x_at_max = xs[k];
    if (on_band(xs[k])) {
      r.near_min = std::min(r.near_min, rs[k]);
      r.near_max = std::max(r.near_max, rs[k]);
    }
  }
  r.pass = r.ratio_max / r.ratio_min <= opt.budget;
  r.near_pass = r.near_max / r.near_min <= opt.near_budget;
  return r;
}

int grid_size(const ComparabilityOptions& opt) {
  if (!(opt.decade_hi > opt.decade_lo) || opt.per_decade < 1)
    throw ParameterError("comparability grid: need decade_lo < decade_hi and per_decade >= 1");
  return static_cast<int>(std::lround((opt.decade_hi - opt.decade_lo) * opt.per_decade)) + 1;
}

double pi_envelope_with(const StableParams& p, const PhiPtr& phi, const Envelope& env, double u) {
  if (std::abs(u) <= std::log(kBand)) return 1.0;
  if (auto* poly = dynamic_cast<const PolyPhi*>(phi.get())) {
    if (poly->beta() < 1.0 && poly->gamma() - poly->beta() < p.alpha)
      return std::exp(u + phi->log_density_log(u));
  }
  return env(1.0, std::exp(u)) * std::exp(u);
}

}  // namespace

ComparabilityResult verify_comparability(const ResurrectionKernel& k, const Envelope& env,
                                         const ComparabilityOptions& opt) {
  const int n = grid_size(opt);
  return sweep(
      n, [&](int i) { return std::pow(10.0, opt.decade_lo + double(i) / opt.per_decade); },
      [&](double x) { return k.q_density(x, 1.0) / env(x, 1.0); },
      [](double x) { return x >= 1.0 / kBand && x <= kBand; }, opt);
}

double pi_envelope(const StableParams& p, const PhiPtr& phi, double u) {
  return pi_envelope_with(p, phi, Envelope::for_phi(p.alpha, phi), u);
}

ComparabilityResult verify_pi_comparability(const ResurrectionKernel& k,
                                            const ComparabilityOptions& opt) {
  const int n = grid_size(opt);
  const double ln10 = std::log(10.0);
  const Envelope env = Envelope::for_phi(k.params().alpha, k.phi_ptr());
  return sweep(
      n, [&](int i) { return (opt.decade_lo + double(i) / opt.per_decade) * ln10; },
      [&](double u) { return k.pi_density(u) / pi_envelope_with(k.params(), k.phi_ptr(), env, u); },
      [](double u) { return std::abs(u) <= std::log(kBand); }, opt);
}

}  // namespace pssmp
