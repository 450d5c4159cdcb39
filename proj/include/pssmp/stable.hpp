#pragma once

#include "pssmp/specfun.hpp"

namespace pssmp {

// Strictly alpha-stable process on R, killed on leaving (0, inf).
struct StableParams {
  double alpha;
  double rho;
  double rho_hat;
  double c_plus;
  double c_minus;
  double drift_a;
};

// Admissible: alpha in (0,1) with rho in (0,1); alpha in (1,2) with
// rho in (1-1/alpha, 1/alpha); or exactly (1, 1/2).
StableParams validate(double alpha, double rho);
bool admissible(double alpha, double rho);

// Levy density of the stable process.
double nu_density(const StableParams& p, double x);

// Levy density of the Lamperti image xi* of the killed process.
double mu_density(const StableParams& p, double y);

double killing_rate(const StableParams& p);

// Characteristic exponent of xi*, killing included: Psi*(0) = killing_rate.
cplx psi_star(const StableParams& p, double theta);

// Linear term b of the generator -b f' + int (f(x+y) - f(x) - f'(x) y 1{|y|<=1}) mu(dy).
double linear_term_b(const StableParams& p);

// p.v. int_{-1}^{1} y mu(y) dy, symmetric case only. Computed from the cut-off
// integrals at eps in {1e-2,1e-3,1e-4} by Richardson extrapolation.
double pv_integral_y_mu(const StableParams& p);

// int_{|y| >= 1} y mu(y) dy
double big_jump_mean(const StableParams& p);

// E xi_1 for the unkilled process, -b + int_{|y|>=1} y mu.
double xi_mean(const StableParams& p);

// sigma_gamma(x) = e^{(1+g)x}/(e^x-1)^{1+a} - e^{-(1+g)x}/(1-e^{-x})^{1+a}
//                = e^{-(1+g)x} (e^{(2g-a+1)x} - 1) / (1-e^{-x})^{1+a},  x > 0.
double sigma_gamma(double alpha, double gamma, double x);

// log(e^y - 1) without overflow, y > 0.
double log_expm1(double y);

}  // namespace pssmp
