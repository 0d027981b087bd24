#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gemdpde {

struct OptimResult {
  std::vector<double> argmin;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  double tolerance_achieved = 0.0;
  std::string message;

  friend bool operator==(const OptimResult&, const OptimResult&) = default;
};

/// Raised by root_1d when the bracket shows no sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTol1d = 1e-10;
inline constexpr double kDefaultTol2d = 1e-8;
inline constexpr int kDefaultMaxIter = 2000;

/// Brent's golden-section/parabolic minimizer on [lo, hi]. A non-finite
/// objective value anywhere probed ends the search with converged = false.
OptimResult minimize_1d(const std::function<double(double)>& objective, double lo, double hi,
                        double tol = kDefaultTol1d, int max_iter = kDefaultMaxIter);

/// Brent root of fn on [lo, hi]; stops once |fn(root)| <= tol or the bracket
/// collapses to machine precision.
double root_1d(const std::function<double(double)>& fn, double lo, double hi,
               double tol = kDefaultTol1d, int max_iter = kDefaultMaxIter);

using Objective2d = std::function<double(double, double)>;

struct NelderMeadOptions {
  double tol = kDefaultTol2d;
  int max_iter = kDefaultMaxIter;
  double initial_step = 0.1;
};

/// Unconstrained Nelder-Mead (Lagarias et al. ordering rules). Converged when
/// both the simplex diameter (sup norm) and the value spread are <= tol.
OptimResult nelder_mead_2d(const Objective2d& objective, std::array<double, 2> start,
                           const NelderMeadOptions& options = {});

/// Minimizes over the open positive quadrant by running Nelder-Mead on
/// (log a, log b), then restarting once from the incumbent. The objective is
/// never evaluated outside the quadrant.
OptimResult minimize_2d(const Objective2d& objective, std::array<double, 2> start,
                        double tol = kDefaultTol2d, int max_iter = kDefaultMaxIter);

}  // namespace gemdpde
