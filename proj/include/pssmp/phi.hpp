#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pssmp/rng.hpp"
#include "pssmp/specfun.hpp"

namespace pssmp {

// Probability measure phi on (0, inf): the law of the restart position
// relative to |z| when the stable process leaves (0, inf) at z < 0.
class PhiMeasure {
 public:
  virtual ~PhiMeasure() = default;

  // int u^s phi(du) for strip_lower() < Re s < kappa0(); DivergenceError outside.
  cplx mellin(cplx s) const;
  virtual double log_moment() const = 0;
  virtual bool has_finite_abs_log_moment() const { return true; }
  // sup{k : int u^k phi(du) < inf}, possibly +inf.
  virtual double kappa0() const = 0;
  // inf{k : int u^k phi(du) < inf}, possibly -inf.
  virtual double strip_lower() const = 0;

  virtual std::optional<double> atom() const { return std::nullopt; }
  virtual double density(double t) const;
  virtual double log_density(double t) const = 0;
  // log phi(e^v), valid where e^v under- or overflows
  virtual double log_density_log(double v) const;
  virtual double sample(Rng& rng) const = 0;

  // phi((1, inf)) > 0
  virtual bool charges_above_one() const { return true; }

  virtual std::string describe() const = 0;

 protected:
  virtual cplx mellin_impl(cplx s) const = 0;
};

using PhiPtr = std::shared_ptr<const PhiMeasure>;

// Gamma(g)/(Gamma(b)Gamma(g-b)) t^{b-1} (1+t)^{-g}, 0 < b < g.
class PolyPhi final : public PhiMeasure {
 public:
  PolyPhi(double beta, double gamma);
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double log_moment() const override;
  double kappa0() const override { return gamma_ - beta_; }
  double strip_lower() const override { return -beta_; }
  double log_density(double t) const override;
  double log_density_log(double v) const override;
  double sample(Rng& rng) const override;
  std::string describe() const override;

 protected:
  cplx mellin_impl(cplx s) const override;

 private:
  double beta_, gamma_, log_norm_;
};

// g a^{b/g}/Gamma(b/g) t^{b-1} e^{-a t^g}
class ExpPhi final : public PhiMeasure {
 public:
  ExpPhi(double a, double beta, double gamma);
  double a() const { return a_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double log_moment() const override;
  double kappa0() const override;
  double strip_lower() const override { return -beta_; }
  double log_density(double t) const override;
  double log_density_log(double v) const override;
  double sample(Rng& rng) const override;
  std::string describe() const override;

 protected:
  cplx mellin_impl(cplx s) const override;

 private:
  double a_, beta_, gamma_, log_norm_;
};

class DiracPhi final : public PhiMeasure {
 public:
  explicit DiracPhi(double a);
  double a() const { return a_; }
  double log_moment() const override;
  double kappa0() const override;
  double strip_lower() const override;
  std::optional<double> atom() const override { return a_; }
  double density(double t) const override;
  double log_density(double t) const override;
  double sample(Rng& rng) const override;
  bool charges_above_one() const override { return a_ > 1.0; }
  std::string describe() const override;

 protected:
  cplx mellin_impl(cplx s) const override;

 private:
  double a_;
};

// Density given on a grid t_0 < ... < t_N, interpolated as a power law on each
// cell (linear in log-log) and continued by power-law tails whose exponents are
// fitted over the first and last decade of the grid. Mellin transform,
// log-moment and inverse CDF are exact for this interpolant.
class TabulatedPhi final : public PhiMeasure {
 public:
  TabulatedPhi(std::vector<double> t, std::vector<double> density, std::string label = "table");
  double log_moment() const override { return log_moment_; }
  double kappa0() const override { return -1.0 - k_hi_; }
  double strip_lower() const override { return -1.0 - k_lo_; }
  double log_density(double t) const override;
  double log_density_log(double v) const override;
  double sample(Rng& rng) const override;
  bool charges_above_one() const override;
  std::string describe() const override { return label_; }
  double tail_exponent_low() const { return k_lo_; }
  double tail_exponent_high() const { return k_hi_; }
  const std::vector<double>& grid() const { return t_; }

 protected:
  cplx mellin_impl(cplx s) const override;

 private:
  double inverse_cdf(double m) const;
  std::vector<double> t_, logf_, slope_, cum_;
  double k_lo_, k_hi_, log_moment_;
  std::string label_;
};

struct SymmetryResult {
  bool symmetric;
  double residual;
  std::string method;
};

// phi(1/t) = t^{1+alpha} phi(t) a.e. The residual is
// sup |phi(1/t) - t^{1+a} phi(t)| / (phi(1/t) + t^{1+a} phi(t)) on t in [1e-4, 1e4].
SymmetryResult is_symmetric(const PhiMeasure& phi, double alpha, double tol = 1e-8);

// phi(t) = f(t + 1/t) / (1 + t)^{1+alpha}, tabulated on a grid symmetric in
// log t over [1e-6, 1e6] and normalized.
std::shared_ptr<TabulatedPhi> from_generator(const std::function<double(double)>& f, double alpha,
                                             int points_per_decade = 60);

// Named families.
PhiPtr trace_phi(double alpha, double rho);       // PolyPhi(1 - alpha rho, 1)
PhiPtr restart_phi(double alpha);                 // PolyPhi(1, 1 + alpha)
PhiPtr symmetric_poly_phi(double alpha, double beta);  // PolyPhi(beta, alpha + 2 beta - 1)

// Reads a two-column CSV "t,density" (header optional).
std::shared_ptr<TabulatedPhi> load_table(const std::string& path);

// Parses poly:beta=..,gamma=.. | exp:a=..,beta=..,gamma=.. | dirac:a=.. |
// table:path=FILE | trace | restart | sym:beta=..
// Families that depend on (alpha, rho) are resolved with the given values.
PhiPtr parse_phi(const std::string& spec, double alpha, double rho);

// True when the spec names a family whose parameters depend on alpha or rho.
bool phi_spec_coupled(const std::string& spec);

}  // namespace pssmp
