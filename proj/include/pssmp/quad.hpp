#pragma once

#include <functional>
#include <vector>

namespace pssmp::quad {

using Fn = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-12;
  // Reported error estimate above max(abs_fail, rel_fail*L1) raises NumericError.
  double rel_fail = 1e-7;
  double abs_fail = 1e-14;
};

// Finite interval; endpoint singularities are fine (tanh-sinh).
double finite(const Fn& f, double a, double b, const Options& opt = {});

// Smooth integrand on a finite interval (adaptive Gauss-Kronrod 61).
double smooth(const Fn& f, double a, double b, const Options& opt = {});

// [a, +inf) and (-inf, b] (exp-sinh).
double upper_tail(const Fn& f, double a, const Options& opt = {});
double lower_tail(const Fn& f, double b, const Options& opt = {});

// Whole real line, split at the given break points. Interior pieces longer
// than max_piece are subdivided; the two tails use exp-sinh.
double line(const Fn& f, std::vector<double> breaks, double max_piece = 2.0,
            const Options& opt = {});

}  // namespace pssmp::quad

namespace pssmp::quad {

// Sum of fixed 20-point Gauss-Legendre rules over consecutive cells
// [nodes[i], nodes[i+1]]; for integrands that are smooth on each cell.
double cells(const Fn& f, const std::vector<double>& nodes);

}  // namespace pssmp::quad
