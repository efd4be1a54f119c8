#pragma once

#include <functional>

namespace paleyscope {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // last Richardson correction
  int evaluations = 0;
  bool converged = false;
};

/// Romberg integration on [a, b]: trapezoid refinements with Richardson
/// extrapolation until successive diagonal entries agree to rel_tol.
QuadratureResult romberg(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-8, int max_levels = 22);

/// Integral over [a, inf) as a sum of Romberg blocks of geometrically growing
/// length tau0 * 2^k. Stops once two consecutive blocks contribute less than
/// rel_tol of the running total; converged = false if that never happens.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double tau0, double rel_tol = 1e-8,
                                       int max_blocks = 400);

}  // namespace paleyscope
