#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pssmp/kernels.hpp"

namespace pssmp {

// Weak scaling of g on (0,1) ("at zero") or [1,inf) ("at infinity"):
// lower  g(R)/g(r) >= c (R/r)^k,  upper  g(R)/g(r) <= C (R/r)^k,  r <= R.
enum class ScalingKind { L_zero, U_zero, L_inf, U_inf };
std::string to_string(ScalingKind k);

struct ScalingCertificate {
  ScalingKind kind;
  double exponent;
  double constant;  // empirical best c (lower, <= 1) or C (upper, >= 1)
  bool pass;        // c >= 1/budget or C <= budget
  double witness_r, witness_R;  // pair attaining the constant
};

// All pairs r <= R of an n-point geometric grid over [1e-6, 1) or [1, 1e6].
ScalingCertificate check_weak_scaling(const std::function<double(double)>& log_g, ScalingKind kind,
                                      double exponent, double budget = 1e3, int n = 200);

enum class EnvelopeFamily { log_power, exponential, compact, integral };
std::string to_string(EnvelopeFamily f);

// Two-sided envelope E(x,y) of q(x,y), homogeneous of degree -1-alpha.
// On the band max/min <= 5 it is max(x,y)^{-1-alpha}. Off the band it is
// max(x,y)^{-1-alpha} f(r), r = max/min, with f taken from the branch table of
// the family for the upward (x < y) or downward (x > y) direction and scaled
// so that f(5) = 1.
class Envelope {
 public:
  // log-power family: phi(t) ~ log(e+t)^{d+} log(e+1/t)^{d-} t^{beta-1} (1+t)^{-gamma}
  static Envelope log_power(double alpha, double beta, double gamma, double delta_plus = 0.0,
                            double delta_minus = 0.0);
  // phi(t) ~ t^{beta-1} e^{-a t^gamma}
  static Envelope exponential(double alpha, double beta);
  // phi with compact support in (0, inf): off-band value (5|x-y|/4)^{-1-alpha}
  static Envelope compact(double alpha);
  // Integral forms int_{1/(r-1)}^1 phi(t) dt/t (down) and int_1^{r-1} t^alpha phi(t) dt (up).
  static Envelope integral(double alpha, PhiPtr phi);
  // Picks the family from the concrete type of phi.
  static Envelope for_phi(double alpha, const PhiPtr& phi);

  double operator()(double x, double y) const;
  EnvelopeFamily family() const { return family_; }
  std::string branch_up() const;
  std::string branch_down() const;
  double alpha() const { return alpha_; }

 private:
  double factor_up(double r) const;
  double factor_down(double r) const;
  double raw_up(double r) const;
  double raw_down(double r) const;

  EnvelopeFamily family_ = EnvelopeFamily::compact;
  double alpha_ = 1.0, beta_ = 1.0, gamma_ = 2.0, dp_ = 0.0, dm_ = 0.0;
  PhiPtr phi_;
  double norm_up_ = 1.0, norm_down_ = 1.0;
};

struct ComparabilityOptions {
  double decade_lo = -6.0, decade_hi = 6.0;
  int per_decade = 25;
  double budget = 1e3;       // ratio_max / ratio_min
  double near_budget = 10.0;  // same on the band x <= y <= 5x (either order)
  bool parallel = true;
};

struct ComparabilityResult {
  double ratio_min, ratio_max;
  double x_at_min, x_at_max;  // y = 1
  double near_min, near_max;
  int points;
  bool pass;       // ratio_max / ratio_min <= budget
  bool near_pass;  // near_max / near_min <= near_budget
};

// Sweeps x over the grid with y = 1 and compares q(x, 1) with E(x, 1); x < 1
// probes the upward direction and x > 1 the downward one.
ComparabilityResult verify_comparability(const ResurrectionKernel& k, const Envelope& env,
                                         const ComparabilityOptions& opt = {});

// Envelope of the Levy density pi(u) = q(1, e^u) e^u: 1 on |u| <= log 5, and
// e^u phi(e^u) outside when phi has two-sided weak scaling at zero and infinity
// (poly with beta < 1 and gamma - beta < alpha). Other families use E(1, e^u) e^u.
double pi_envelope(const StableParams& p, const PhiPtr& phi, double u);

// Same sweep for pi over u in [-L, L], L = decade_hi * log(10).
ComparabilityResult verify_pi_comparability(const ResurrectionKernel& k,
                                            const ComparabilityOptions& opt = {});

}  // namespace pssmp
