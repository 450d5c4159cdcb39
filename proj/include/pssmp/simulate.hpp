#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pssmp/phi.hpp"
#include "pssmp/rng.hpp"
#include "pssmp/stable.hpp"

namespace pssmp {

struct SimConfig {
  double epsilon = 1e-3;  // jumps of xi with |y| <= epsilon are not simulated
  double horizon = 1.0;   // time horizon for xi-bar and for the X-time output grid
  double dt_out = 0.01;   // output grid; also the Brownian knot spacing
  std::uint64_t seed = 1;
  int n_paths = 1;
  // Brownian stand-in for the small jumps; unset means on for alpha >= 1.
  std::optional<bool> gaussian_compensation;
  void validate() const;
  bool gaussian(double alpha) const { return gaussian_compensation.value_or(alpha >= 1.0); }
};

// Piecewise linear path with knots (times[i], values[i]). A jump at time t is
// stored as two knots with the same time: pre-jump and post-jump value.
struct LevyPath {
  std::vector<double> times;
  std::vector<double> values;
  double value_at(double t) const;  // right-continuous
};

struct PssmpPath {
  double start = 1.0;
  std::vector<double> times;
  std::vector<double> values;
  bool absorbed = false;
  // x^alpha I_T, reported as an estimate of the absorption time when absorbed
  std::optional<double> absorption_time;
  double clock_total = 0.0;  // I_T
};

// W with density alpha e^w (1+e^w)^{-1-alpha} from a uniform u in (0,1).
double chi_w_from_uniform(double alpha, double u);
// One jump of chi: W + log V, V ~ phi.
double sample_chi_jump(const StableParams& p, const PhiMeasure& phi, Rng& rng);

// xi-bar = xi + chi with xi simulated as: compound Poisson jumps of mu with |y| > eps
// (exact inverse CDF), drift -b - int_{eps<|y|<=1} y mu, optional Brownian part
// with variance sigma^2(eps) = int_{|y|<=eps} y^2 mu; chi at rate c_-/alpha.
class XiBarSampler {
 public:
  XiBarSampler(const StableParams& p, PhiPtr phi, const SimConfig& cfg);

  struct Endpoint {
    double value;   // xi-bar(horizon)
    int chi_jumps;  // number of chi jumps on [0, horizon]
    int big_jumps;  // number of |y| > eps jumps of xi
  };

  LevyPath path(Rng& rng) const;
  Endpoint endpoint(Rng& rng) const;

  double drift() const { return drift_; }
  double sigma2() const { return sigma2_; }
  double rate_positive() const { return rate_pos_; }
  double rate_negative() const { return rate_neg_; }
  double rate_chi() const { return rate_chi_; }
  // Sample one big jump of xi (sign chosen by the rates).
  double big_jump(Rng& rng) const;

 private:
  StableParams p_;
  PhiPtr phi_;
  SimConfig cfg_;
  bool gauss_;
  double drift_, sigma2_, rate_pos_, rate_neg_, rate_chi_, k_neg_;
};

LevyPath sample_xi_bar_path(const StableParams& p, const PhiPtr& phi, const SimConfig& cfg,
                            Rng& rng);

// I_t = int_0^t e^{alpha xi_u} du for a piecewise linear xi, exact on each piece,
// and its right-continuous inverse.
class LampertiClock {
 public:
  LampertiClock(const LevyPath& xi, double alpha);
  double at(double t) const;
  // inf{t : I_t > u} for u < I_T; T for u >= I_T
  double inverse(double u) const;
  double total() const { return I_.back(); }

 private:
  const LevyPath& xi_;
  double alpha_;
  std::vector<double> I_;
};

double inverse_clock(const LevyPath& xi, double alpha, double u);

// X_s = x exp(xi(tau(x^{-alpha} s))) on the grid s_k = k dt_out <= horizon, where tau
// inverts I_t = int_0^t e^{alpha xi_u} du (exact for piecewise linear xi). Grid
// points with x^{-alpha} s > I_T are left out. The path is flagged absorbed when I
// has plateaued: (I_T - I_{T/10}) / I_T < plateau_tol.
PssmpPath lamperti_transform(const LevyPath& xi, double x, double alpha, double dt_out,
                             double horizon, double plateau_tol = 1e-6);

// The regular step process: hold at z for an Exp((c_-/alpha) z^{-alpha}) time,
// then jump to z V e^W. Knots are the states after each jump.
struct StepPath {
  PssmpPath path;
  std::vector<double> holding_times;
  std::vector<double> log_multipliers;
};
StepPath simulate_step_process(const StableParams& p, const PhiMeasure& phi, double x, int n_jumps,
                               Rng& rng);

// Monte Carlo summary of xi-bar(horizon) over cfg.n_paths independent paths.
struct EndpointStats {
  int n;
  double mean, std_error;
  double chi_mean, chi_var;  // counts of chi jumps
  std::vector<double> thetas;
  std::vector<double> ecf_re, ecf_im;  // (1/n) sum exp(i theta xi-bar)
  std::vector<double> ecf_se_re, ecf_se_im;
  std::vector<double> values;  // per-path endpoints in path order
};
EndpointStats endpoint_stats(const StableParams& p, const PhiPtr& phi, const SimConfig& cfg,
                             const std::vector<double>& thetas, bool parallel = true);

// Paths for output; path i uses stream (seed, i).
std::vector<LevyPath> simulate_paths(const StableParams& p, const PhiPtr& phi, const SimConfig& cfg,
                                     bool parallel = true);

}  // namespace pssmp
