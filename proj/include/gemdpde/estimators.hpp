#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gemdpde/gedist.hpp"
#include "gemdpde/optimize.hpp"

namespace gemdpde {

enum class Method { ML, MM, PT, LS, WLS, LM, MDPDE };

std::string_view method_name(Method method);
/// Case-insensitive; throws std::invalid_argument for unknown names.
Method parse_method(std::string_view name);

struct FitResult {
  Method method;
  GEParams params;
  std::optional<double> alpha;  // MDPDE only
  double objective_value = 0.0;
  OptimResult optim;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// A fit that cannot be carried out at all (as opposed to an optimizer that
/// ran out of iterations, which is reported through FitResult::optim).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FitResult fit_ml(const Sample& sample);
FitResult fit_mm(const Sample& sample);
FitResult fit_pt(const Sample& sample);
FitResult fit_ls(const Sample& sample);
FitResult fit_wls(const Sample& sample);
FitResult fit_lm(const Sample& sample);

/// Mean log-likelihood and its gradient (d/dlambda, d/dnu).
double mean_log_likelihood(std::span<const double> values, const GEParams& params);
std::array<double, 2> mean_score(std::span<const double> values, const GEParams& params);

/// ML estimate of nu for fixed lambda: -n / sum log(1 - exp(-lambda x)).
double ml_nu_given_lambda(std::span<const double> values, double lambda);

/// Objectives of the order-statistic estimators; `sorted` must be ascending.
double pt_objective(std::span<const double> sorted, const GEParams& params);
double ls_objective(std::span<const double> sorted, const GEParams& params,
                    std::span<const double> weights = {});
std::vector<double> wls_weights(std::size_t n);

/// Coefficient of variation sd/mean of GE(., nu); independent of lambda.
double ge_cv(double nu);
/// Ratio of second to first L-moment of GE(., nu); independent of lambda.
double ge_l_ratio(double nu);

/// MM estimate when it exists, otherwise (1/mean, 1). Used to start 2-D searches.
GEParams starting_values(const Sample& sample);

}  // namespace gemdpde
