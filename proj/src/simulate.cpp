#include "pssmp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pssmp/errors.hpp"
#include "pssmp/format.hpp"
#include "pssmp/quad.hpp"

namespace pssmp {

namespace {

double exponential(Rng& rng, double rate) { return -std::log(uniform_open(rng)) / rate; }

double standard_normal(Rng& rng) {
  std::normal_distribution<double> n;
  return n(rng);
}

// expm1(z)/z
double expm1_ratio(double z) { return std::abs(z) < 1e-300 ? 1.0 : std::expm1(z) / z; }

}  // namespace

void SimConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 0.1))
    throw ParameterError("epsilon must lie in (0, 0.1] (got " + g17(epsilon) + ")");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ParameterError("horizon must be positive");
  if (!(dt_out > 0.0)) throw ParameterError("dt_out must be positive");
  if (n_paths < 1) throw ParameterError("n_paths must be at least 1");
}

double LevyPath::value_at(double t) const {
  if (times.empty()) throw PreconditionError("empty path");
  if (t <= times.front()) return values.front();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times.begin()) - 1;
  if (j + 1 >= times.size()) return values.back();
  const double dt = times[j + 1] - times[j];
  return values[j] + (values[j + 1] - values[j]) * (t - times[j]) / dt;
}

double chi_w_from_uniform(double alpha, double u) {
  // F(w) = 1 - (1 + e^w)^{-alpha}
  return std::log(std::expm1(-std::log1p(-u) / alpha));
}

double sample_chi_jump(const StableParams& p, const PhiMeasure& phi, Rng& rng) {
  return chi_w_from_uniform(p.alpha, uniform_open(rng)) + std::log(phi.sample(rng));
}

XiBarSampler::XiBarSampler(const StableParams& p, PhiPtr phi, const SimConfig& cfg)
    : p_(p), phi_(std::move(phi)), cfg_(cfg) {
  cfg_.validate();
  gauss_ = cfg_.gaussian(p.alpha);
  const double a = p.alpha, eps = cfg_.epsilon;
  auto ymu = [&](double y) { return y * mu_density(p_, y); };
  drift_ = -linear_term_b(p_) - (quad::finite(ymu, eps, 1.0) + quad::finite(ymu, -1.0, -eps));
  sigma2_ = 0.0;
  if (gauss_) {
    auto y2mu = [&](double y) { return y == 0.0 ? 0.0 : y * y * mu_density(p_, y); };
    sigma2_ = quad::finite(y2mu, 0.0, eps) + quad::finite(y2mu, -eps, 0.0);
  }
  rate_pos_ = p.c_plus / a * std::exp(-a * std::log(std::expm1(eps)));
  k_neg_ = std::expm1(-a * std::log(-std::expm1(-eps)));
  rate_neg_ = p.c_minus / a * k_neg_;
  rate_chi_ = killing_rate(p_);
}

double XiBarSampler::big_jump(Rng& rng) const {
  const double a = p_.alpha;
  const bool up = uniform_open(rng) * (rate_pos_ + rate_neg_) < rate_pos_;
  const double v = uniform_open(rng);
  if (up) return std::log1p(std::expm1(cfg_.epsilon) * std::exp(-std::log(v) / a));
  return std::log(-std::expm1(-std::log1p(v * k_neg_) / a));
}

LevyPath XiBarSampler::path(Rng& rng) const {
  const double T = cfg_.horizon, dt = cfg_.dt_out;
  const double total = rate_pos_ + rate_neg_ + rate_chi_;
  LevyPath out;
  out.times.push_back(0.0);
  out.values.push_back(0.0);
  double t = 0.0, v = 0.0;
  auto advance = [&](double s) {
    const double h = s - t;
    v += drift_ * h;
    if (gauss_) v += std::sqrt(sigma2_ * h) * standard_normal(rng);
    t = s;
    out.times.push_back(t);
    out.values.push_back(v);
  };
  long k = 1;
  double tg = gauss_ ? dt : std::numeric_limits<double>::infinity();
  double tj = exponential(rng, total);
  for (;;) {
    const double stop = std::min(tj, T);
    while (tg <= stop) {
      advance(tg);
      tg = static_cast<double>(++k) * dt;
    }
    if (tj > T) {
      if (t < T) advance(T);
      break;
    }
    advance(tj);
    if (uniform_open(rng) * total < rate_pos_ + rate_neg_)
      v += big_jump(rng);
    else
      v += sample_chi_jump(p_, *phi_, rng);
    out.times.push_back(t);
    out.values.push_back(v);
    tj += exponential(rng, total);
  }
  return out;
}

XiBarSampler::Endpoint XiBarSampler::endpoint(Rng& rng) const {
  const double T = cfg_.horizon;
  const double total = rate_pos_ + rate_neg_ + rate_chi_;
  Endpoint e{drift_ * T, 0, 0};
  if (gauss_) e.value += std::sqrt(sigma2_ * T) * standard_normal(rng);
  for (double t = exponential(rng, total); t <= T; t += exponential(rng, total)) {
    if (uniform_open(rng) * total < rate_pos_ + rate_neg_) {
      e.value += big_jump(rng);
      ++e.big_jumps;
    } else {
      e.value += sample_chi_jump(p_, *phi_, rng);
      ++e.chi_jumps;
    }
  }
  return e;
}

LevyPath sample_xi_bar_path(const StableParams& p, const PhiPtr& phi, const SimConfig& cfg,
                            Rng& rng) {
  return XiBarSampler(p, phi, cfg).path(rng);
}

LampertiClock::LampertiClock(const LevyPath& xi, double alpha) : xi_(xi), alpha_(alpha) {
  if (xi.times.empty()) throw PreconditionError("clock of an empty path");
  const std::size_t n = xi.times.size();
  I_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = xi.times[i + 1] - xi.times[i];
    I_[i + 1] = I_[i];
    if (h > 0.0)
      I_[i + 1] += h * std::exp(alpha * xi.values[i]) *
                   expm1_ratio(alpha * (xi.values[i + 1] - xi.values[i]));
  }
}

double LampertiClock::at(double t) const {
  const auto& ts = xi_.times;
  if (t <= ts.front()) return 0.0;
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - ts.begin()) - 1;
  if (j + 1 >= ts.size()) return I_.back();
  const double h = ts[j + 1] - ts[j];
  const double s = t - ts[j];
  const double slope = (xi_.values[j + 1] - xi_.values[j]) / h;
  return I_[j] + s * std::exp(alpha_ * xi_.values[j]) * expm1_ratio(alpha_ * slope * s);
}

double LampertiClock::inverse(double u) const {
  const auto& ts = xi_.times;
  const auto& vs = xi_.values;
  const std::size_t n = ts.size();
  if (u <= 0.0) return ts.front();
  const auto it = std::upper_bound(I_.begin(), I_.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - I_.begin()) - 1;
  if (j + 1 >= n) return ts.back();
  const double h = ts[j + 1] - ts[j];
  const double slope = (vs[j + 1] - vs[j]) / h;
  // I_j + e^{a v_j} (e^{z s} - 1)/z = u with z = a slope
  const double d = (u - I_[j]) * std::exp(-alpha_ * vs[j]);
  const double z = alpha_ * slope;
  double s = std::abs(z * d) < 1e-12 ? d : std::log1p(d * z) / z;
  if (!(s <= h)) s = h;
  return ts[j] + s;
}

double inverse_clock(const LevyPath& xi, double alpha, double u) {
  return LampertiClock(xi, alpha).inverse(u);
}

PssmpPath lamperti_transform(const LevyPath& xi, double x, double alpha, double dt_out,
                             double horizon, double plateau_tol) {
  if (!(x > 0.0)) throw DomainError("lamperti_transform: start must be positive");
  const LampertiClock clock(xi, alpha);
  PssmpPath out;
  out.start = x;
  out.clock_total = clock.total();
  const double T = xi.times.back();
  const double tail = out.clock_total - clock.at(T / 10.0);
  out.absorbed = out.clock_total > 0.0 && tail / out.clock_total < plateau_tol;
  const double xa = std::pow(x, alpha);
  if (out.absorbed) out.absorption_time = xa * out.clock_total;

  const long steps = static_cast<long>(std::floor(horizon / dt_out * (1.0 + 1e-12)));
  for (long k = 0; k <= steps; ++k) {
    const double s = k * dt_out;
    const double u = s / xa;
    if (u > out.clock_total) break;
    const double X = x * std::exp(xi.value_at(clock.inverse(u)));
    if (!(X > 0.0) || !std::isfinite(X))
      throw NumericError("lamperti_transform: X left (0, inf) at a finite clock value");
    out.times.push_back(s);
    out.values.push_back(X);
  }
  return out;
}

StepPath simulate_step_process(const StableParams& p, const PhiMeasure& phi, double x, int n_jumps,
                               Rng& rng) {
  if (!(x > 0.0)) throw DomainError("step process: start must be positive");
  if (n_jumps < 0) throw ParameterError("step process: n_jumps must be non-negative");
  StepPath out;
  out.path.start = x;
  out.path.times.push_back(0.0);
  out.path.values.push_back(x);
  const double k = killing_rate(p);
  double z = x, t = 0.0;
  for (int i = 0; i < n_jumps; ++i) {
    const double h = exponential(rng, k * std::pow(z, -p.alpha));
    const double lm = sample_chi_jump(p, phi, rng);
    t += h;
    z *= std::exp(lm);
    if (!(z > 0.0) || !std::isfinite(z)) throw NumericError("step process left (0, inf)");
    out.holding_times.push_back(h);
    out.log_multipliers.push_back(lm);
    out.path.times.push_back(t);
    out.path.values.push_back(z);
  }
  out.path.clock_total = t;
  return out;
}

EndpointStats endpoint_stats(const StableParams& p, const PhiPtr& phi, const SimConfig& cfg,
                             const std::vector<double>& thetas, bool parallel) {
  const XiBarSampler sampler(p, phi, cfg);
  const int n = cfg.n_paths;
  std::vector<double> vals(n);
  std::vector<int> chi(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(i));
    const auto e = sampler.endpoint(rng);
    vals[i] = e.value;
    chi[i] = e.chi_jumps;
  }
  EndpointStats s;
  s.n = n;
  s.thetas = thetas;
  double sum = 0.0, csum = 0.0;
  for (int i = 0; i < n; ++i) sum += vals[i], csum += chi[i];
  s.mean = sum / n;
  s.chi_mean = csum / n;
  double ss = 0.0, cs = 0.0;
  for (int i = 0; i < n; ++i) {
    ss += (vals[i] - s.mean) * (vals[i] - s.mean);
    cs += (chi[i] - s.chi_mean) * (chi[i] - s.chi_mean);
  }
  const double denom = n > 1 ? n - 1.0 : 1.0;
  s.std_error = std::sqrt(ss / denom / n);
  s.chi_var = cs / denom;
  for (double th : thetas) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) re += std::cos(th * vals[i]), im += std::sin(th * vals[i]);
    re /= n;
    im /= n;
    double vr = 0.0, vi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = std::cos(th * vals[i]) - re, d = std::sin(th * vals[i]) - im;
      vr += c * c;
      vi += d * d;
    }
    s.ecf_re.push_back(re);
    s.ecf_im.push_back(im);
    s.ecf_se_re.push_back(std::sqrt(vr / denom / n));
    s.ecf_se_im.push_back(std::sqrt(vi / denom / n));
  }
  s.values = std::move(vals);
  return s;
}

std::vector<LevyPath> simulate_paths(const StableParams& p, const PhiPtr& phi, const SimConfig& cfg,
                                     bool parallel) {
  const XiBarSampler sampler(p, phi, cfg);
  std::vector<LevyPath> out(cfg.n_paths);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < cfg.n_paths; ++i) {
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(i));
    out[i] = sampler.path(rng);
  }
  return out;
}

}  // namespace pssmp
