#pragma once

#include <complex>

namespace pssmp {

using cplx = std::complex<double>;

// A logarithm of Gamma(z). Stirling series after shifting Re z >= 15,
// reflection for Re z < 1/2, where the imaginary part is only fixed mod 2 pi.
// Relative error of exp(ln_gamma) is ~1e-14 for |z| <= 50.
cplx ln_gamma(cplx z);

// log|Gamma(x)| and sign(Gamma(x)) for real x (thread-safe lgamma_r).
double ln_abs_gamma(double x, int* sign = nullptr);

// 1/Gamma(x), exactly 0 at the poles.
double rgamma(double x);

double digamma(double x);

double beta_fn(double a, double b);

// Gauss 2F1(a,b;c;z) for real parameters and z < 1.
double gauss_2f1(double a, double b, double c, double z);

// Same function evaluated at z = 1 - w, for callers that know 1 - z to full
// relative precision (z = 1 - e^{-y} with y large).
double gauss_2f1_complement(double a, double b, double c, double w);

// Plain power series, exposed for testing the transformation branches.
double gauss_2f1_series(double a, double b, double c, double z);

// arccot into (0, pi), strictly decreasing.
double arccot(double x);

}  // namespace pssmp
