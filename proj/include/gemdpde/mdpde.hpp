#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "gemdpde/estimators.hpp"
#include "gemdpde/gedist.hpp"

namespace gemdpde {

/// Tuning configuration; `grid` must be strictly increasing and nonnegative.
struct DpdConfig {
  double alpha = 0.0;
  std::vector<double> grid;
  double tolerance = kDefaultTol2d;

  void validate() const;
};

/// alpha = 0, 0.02, ..., 1.0
std::vector<double> default_alpha_grid();

/// Shape threshold alpha / (1 + alpha); the integral of f^(1+alpha) is finite
/// iff nu lies above it.
double nu_threshold(double alpha);

/// Integral of f^(1+alpha) over (0, inf):
///   lambda^alpha nu^(1+alpha) B(1+alpha, 1+(1+alpha)(nu-1)),
/// and +inf where nu <= alpha/(1+alpha) (the integral diverges there).
double integral_density_power(const GEParams& params, double alpha);

/// Per-observation DPD objective term. For alpha = 0 this is -log f(x).
double v_alpha(double x, const GEParams& params, double alpha);

/// H_{alpha,n}: mean of v_alpha over the sample.
double h_objective(std::span<const double> values, const GEParams& params, double alpha);

/// Score u(x) = d log f / d(lambda, nu).
std::array<double, 2> score_vector(double x, const GEParams& params);

/// Closed-form integral of u f^(1+alpha), valid for nu > alpha/(1+alpha).
std::array<double, 2> weighted_score_integral(const GEParams& params, double alpha);

/// (U_n(lambda; nu), U_n(nu; lambda)): the weighted score equations, zero at
/// the MDPDE. The gradient of h_objective equals -(1 + alpha) times this.
/// Throws std::domain_error where nu <= alpha/(1+alpha).
std::array<double, 2> estimating_equations(std::span<const double> values,
                                           const GEParams& params, double alpha);

/// Minimizes h_objective by Nelder-Mead in log coordinates. Starts from the
/// MM estimate unless a warm start is given.
FitResult fit_mdpde(const Sample& sample, double alpha,
                    std::optional<GEParams> start = std::nullopt);

struct CvmCurve {
  std::vector<double> alphas;
  std::vector<double> distances;  // NaN where the alpha failed
  std::vector<bool> failed;
  double optimal_alpha = 0.0;
  std::size_t optimal_index = 0;

  friend bool operator==(const CvmCurve&, const CvmCurve&) = default;
};

/// Leave-one-out Cramer-von Mises selection of alpha. For each alpha and each
/// order statistic X_(i), refits on the sample without X_(i) (warm-started at
/// the full-sample fit) and averages (i/(n+1) - F(X_(i)))^2. Ties go to the
/// smallest alpha. An alpha with any failed refit is excluded.
CvmCurve select_alpha_cvm(const Sample& sample, const std::vector<double>& grid,
                          int threads = 1);

}  // namespace gemdpde
