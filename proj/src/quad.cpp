#include "pssmp/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pssmp/errors.hpp"

namespace pssmp::quad {

namespace {

void check(const char* who, double value, double err, double l1, const Options& opt, double a,
           double b) {
  if (!std::isfinite(value) || err > std::max(opt.abs_fail, opt.rel_fail * l1)) {
    std::ostringstream os;
    os << "quadrature (" << who << ") failed on [" << a << ", " << b << "]: value=" << value
       << " err=" << err << " L1=" << l1;
    throw NumericError(os.str());
  }
}

// Boost may hand the integrand abscissas numerically equal to an endpoint.
// Integrands in this library are allowed to be singular there; treat the
// evaluation as a null contribution rather than poisoning the sum.
template <class F>
auto guarded(const F& f) {
  return [&f](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
}

}  // namespace

double finite(const Fn& f, double a, double b, const Options& opt) {
  if (a == b) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0, l1 = 0.0;
  auto g = guarded(f);
  const double v = ts.integrate(g, a, b, opt.rel_tol, &err, &l1);
  check("tanh_sinh", v, err, l1, opt, a, b);
  return v;
}

double smooth(const Fn& f, double a, double b, const Options& opt) {
  if (a == b) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, opt.rel_tol, &err,
                                                                    &l1);
  check("gauss_kronrod", v, err, l1, opt, a, b);
  return v;
}

double upper_tail(const Fn& f, double a, const Options& opt) {
  thread_local boost::math::quadrature::exp_sinh<double> es(12);
  double err = 0.0, l1 = 0.0;
  auto g = [&](double x) {
    const double v = f(a + x);
    return std::isfinite(v) ? v : 0.0;
  };
  const double v = es.integrate(g, 0.0, std::numeric_limits<double>::infinity(), opt.rel_tol, &err,
                                &l1);
  check("exp_sinh", v, err, l1, opt, a, std::numeric_limits<double>::infinity());
  return v;
}

double lower_tail(const Fn& f, double b, const Options& opt) {
  return upper_tail([&](double x) { return f(2.0 * b - x); }, b, opt);
}

double line(const Fn& f, std::vector<double> breaks, double max_piece, const Options& opt) {
  if (breaks.empty()) breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = lower_tail(f, breaks.front(), opt);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_piece)));
    for (int k = 0; k < pieces; ++k)
      total += finite(f, lo + (hi - lo) * k / pieces, lo + (hi - lo) * (k + 1) / pieces, opt);
  }
  total += upper_tail(f, breaks.back(), opt);
  return total;
}

double cells(const Fn& f, const std::vector<double>& nodes) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, nodes[i], nodes[i + 1]);
  if (!std::isfinite(total)) throw NumericError("quadrature (cells) produced a non-finite sum");
  return total;
}

}  // namespace pssmp::quad
