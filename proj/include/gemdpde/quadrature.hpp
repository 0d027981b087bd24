#pragma once

#include <functional>

namespace gemdpde {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of fn over [a, b].
/// Stops once the error estimate is below max(abs_tol, rel_tol * |value|).
/// Reversed limits negate the result.
QuadResult integrate(const std::function<double(double)>& fn, double a, double b,
                     double abs_tol = 1e-14, double rel_tol = 1e-12, int max_intervals = 4000);

}  // namespace gemdpde
