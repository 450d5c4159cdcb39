#pragma once

#include <functional>

namespace pssmp {

struct RootResult {
  double x;
  double fx;
  int iterations;
};

// Brent's method. Throws BracketError when f(a), f(b) have the same sign.
RootResult brent(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-15, int max_iter = 200);

}  // namespace pssmp
