#pragma once

#include "pssmp/phi.hpp"
#include "pssmp/stable.hpp"

namespace pssmp {

// q(x,y) = int_{-inf}^0 j(x,z) phi(dy/|z|) dz: intensity of jumps from x
// created by resurrecting the stable process at y after it leaves (0, inf).
class ResurrectionKernel {
 public:
  ResurrectionKernel(StableParams p, PhiPtr phi);

  const StableParams& params() const { return p_; }
  const PhiMeasure& phi() const { return *phi_; }
  PhiPtr phi_ptr() const { return phi_; }

  // c_- int (x + y/t)^{-1-alpha} t^{-1} phi(dt)
  double q_density(double x, double y) const;
  // (c_-/alpha) x^{-alpha}
  double q_mass(double x) const;

  // Levy density of chi: q(1, e^y) e^y, and the equivalent e^{-alpha y} q(e^{-y}, 1).
  double pi_density(double y) const;
  double pi_density_alt(double y) const;

  // Jump law of chi as the convolution of f(w) = alpha e^w (1+e^w)^{-1-alpha}
  // with the law of log V, V ~ phi.
  double Pi_density(double y) const;
  // Closed form through 2F1, PolyPhi only.
  double Pi_density_hyp(double y) const;

  // (c_-/alpha) Gamma(alpha - i theta) Gamma(1 + i theta) / Gamma(alpha) * mellin(i theta)
  cplx pi_hat(double theta) const;

  double j_density(double x, double y) const;
  double J_density(double x, double y) const;
  // B = J / j = 1 + q / j; B(x, x) = 1.
  double boundary_factor(double x, double y) const;

 private:
  // e^shift q(x, x e^{v0}), logx = log x
  double q_integral(double logx, double v0, double shift = 0.0) const;
  StableParams p_;
  PhiPtr phi_;
};

// Smallest C with |B(x,y) - 1| <= C (|x-y| / (x^y))^{1+alpha} over a grid of
// pairs with |x - y| <= (x ^ y)/4.
double near_diagonal_constant(const ResurrectionKernel& k, int n = 40);

}  // namespace pssmp
