#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pssmp/phi.hpp"
#include "pssmp/stable.hpp"

namespace pssmp {

// Psi-bar(theta) = Gamma(a - i th) Gamma(1 + i th) / pi
//                  * (sin(pi(a rho_hat - i th)) - sin(pi a rho_hat) mellin(i th))
cplx overline_psi(const StableParams& p, const PhiMeasure& phi, double theta);
// Same exponent as Psi*(theta) - pi_hat(theta).
cplx overline_psi_direct(const StableParams& p, const PhiMeasure& phi, double theta);
// Psi-bar(-i kappa), real for kappa in the Mellin strip.
double overline_psi_imag(const StableParams& p, const PhiMeasure& phi, double kappa);

// E xi-bar_1 = i Psi-bar'(0) = Gamma(a) (cos(pi a rho_hat) + sin(pi a rho_hat) logmoment / pi)
double mean_xi1(const StableParams& p, const PhiMeasure& phi);
// Centered difference of Psi-bar along the imaginary axis.
double mean_xi1_fd(const StableParams& p, const PhiMeasure& phi, double h = 1e-5);

enum class Verdict { infinite_absorption, finite_absorption_continuous, boundary_zero_mean };
std::string to_string(Verdict v);

struct ClassificationReport {
  double alpha = 0, rho = 0;
  std::string phi;
  double mean_xi1 = 0;
  Verdict verdict = Verdict::infinite_absorption;
  bool absorption_infinite = true;  // mean >= 0, boundary case included
  double a_phi = 0;                 // (1/pi) arccot(L/pi), L = -logmoment
  double rho_critical = 0;          // 1 - a_phi/alpha when admissible
  bool rho_critical_admissible = false;
  std::optional<double> kappa_star;
};

ClassificationReport classify(const StableParams& p, const PhiMeasure& phi,
                              double zero_tol = 1e-12);

struct CurveInfo {
  double a_phi;      // L = -int log u phi(du)
  double a_phi_alt;  // same formula with +int log u
  double alpha_lower;  // rho(alpha) = 0, equals a_phi
  double alpha_upper;  // rho(alpha) = 1/alpha, equals 1 + a_phi
  double rho_of_alpha(double alpha) const { return 1.0 - a_phi / alpha; }
};

// For measures whose log-moment does not depend on alpha.
CurveInfo a_phi_and_curve(const PhiMeasure& phi);

struct CriticalAlphas {
  std::optional<double> alpha_lower;
  double alpha_upper;
  double rho_star;  // 1 / alpha_upper
};

// log_moment_of_alpha gives int log u phi_alpha(du) for a family coupled to alpha.
// alpha_upper solves pi cot(pi(a-1)) + m(a) = 0 on (1,2); alpha_lower solves
// a pi = arccot(-m(a)/pi) on (1e-6, 1) when that has a root.
CriticalAlphas critical_alphas(const std::function<double(double)>& log_moment_of_alpha);

// Log-moment functions for the two coupled families of interest.
double restart_log_moment(double alpha);   // PolyPhi(1, 1+alpha): psi(1) - psi(alpha)
double censored_log_moment(double alpha);  // censored process: psi(alpha) - psi(1)

// i Psi'(0) for the censored process.
double censored_mean(const StableParams& p);

// h(kappa) = sin(pi(a rho_hat - kappa)) - sin(pi a rho_hat) mellin(kappa); -inf past kappa0.
double h_function(const StableParams& p, const PhiMeasure& phi, double kappa);
// Root of h in (0, min(alpha, kappa0)).
double recurrent_extension_kappa(const StableParams& p, const PhiMeasure& phi);

enum class RegionSign { negative, zero, positive, undetermined };
std::string to_string(RegionSign s);

struct SymmetricRegionResult {
  RegionSign predicted;
  double mean;
  bool consistent;  // predicted sign agrees with mean (always true when undetermined)
};

// Sign of E xi-bar_1 read off (alpha, rho_hat) for a symmetric kernel.
SymmetricRegionResult symmetric_region(const StableParams& p, const PhiMeasure& phi);

struct ModifiedMeanResult {
  double sigma_route;
  double quadrature_route;
  int predicted_sign;
  bool agree;
};

// E xi-bar_1 for the symmetric base (rho = 1/2, c = 1) with jump kernel B(x,y) j(x,y),
// two ways: int_0^inf y sigma(y) dy, and -b-bar + int_{|y|>=1} y mu^B with
// b-bar = b - int_{-1}^{1} y (B(1,e^y) - 1) mu(y) dy.
// Power factor B(x,y) = (y/x)^gamma; the sign is that of 1 + 2 gamma - alpha.
ModifiedMeanResult modified_kernel_mean_power(double alpha, double gamma);
// Symmetric factor given as Bm1(y) = B(1, e^y) - 1; the sign is that of 1 - alpha.
ModifiedMeanResult modified_kernel_mean_symmetric(double alpha,
                                                  const std::function<double(double)>& Bm1);

struct RegionCell {
  double alpha, rho;
  bool admissible;
  int sign;  // -1, 0, +1
  double mean;
};

// Grid alpha_i = 2(i+1)/(n+1), rho_j = (j+1)/(m+1); phi_at builds the measure
// for a given (alpha, rho).
using PhiFactory = std::function<PhiPtr(double alpha, double rho)>;
std::vector<RegionCell> region_grid(const PhiFactory& phi_at, int n, int m, bool parallel = true,
                                    double zero_tol = 1e-12);

struct CurvePoint {
  double alpha;
  double rho;
};

// Zero set of E xi-bar_1 in rho for each alpha, by Brent on the admissible rho interval.
std::vector<CurvePoint> critical_curve(const PhiFactory& phi_at, const std::vector<double>& alphas);

}  // namespace pssmp
