#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gemdpde/fit.hpp"
#include "gemdpde/gedist.hpp"

namespace gemdpde {

struct TrendResult {
  double slope = 0.0;
  double intercept = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;

  friend bool operator==(const TrendResult&, const TrendResult&) = default;
};

/// OLS of value on time with a two-sided t test on the slope. With zero
/// residual variance the p-value is 1 for a zero slope and 0 otherwise.
TrendResult trend_test(const Sample& sample, std::span<const double> times);
double trend_pvalue(const Sample& sample, std::span<const double> times);

struct AcfPacf {
  std::vector<double> acf;   // lags 1..max_lag
  std::vector<double> pacf;  // lags 1..max_lag

  friend bool operator==(const AcfPacf&, const AcfPacf&) = default;
};

/// Sample ACF with the biased (divide by n) autocovariance and PACF by
/// Durbin-Levinson. Requires max_lag < n/2.
AcfPacf acf_pacf(const Sample& sample, int max_lag);

/// Medcouple by the naive O(n^2) kernel, with the usual sign convention for
/// pairs tied at the median.
double medcouple(std::span<const double> values);

/// Tukey's five-number summary (min, lower hinge, median, upper hinge, max).
std::array<double, 5> five_number_summary(std::span<const double> values);

struct OutlierReport {
  std::vector<std::size_t> flagged_indices;  // positions in the input sample
  double lower_fence = 0.0;
  double upper_fence = 0.0;
  double medcouple = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;

  friend bool operator==(const OutlierReport&, const OutlierReport&) = default;
};

/// Adjusted boxplot for skewed data (fences tilted by exp(-4 MC), exp(3 MC)).
OutlierReport flag_outliers_adjusted_boxplot(const Sample& sample);

/// Copy of the sample without the flagged observations.
Sample remove_flagged(const Sample& sample, const OutlierReport& report);

/// Exact sup |F_n - F| over the order statistics.
double ks_statistic(std::span<const double> values, const GEParams& params);

struct GofReport {
  double ks_statistic = 0.0;
  double p_value = 1.0;
  int bootstrap_B = 0;
  int failures = 0;
  std::string method;
  GEParams fitted{1.0, 1.0};

  friend bool operator==(const GofReport&, const GofReport&) = default;
};

/// K-S test with a parametric-bootstrap p-value (1 + #{D* >= D}) / (B + 1).
/// Replicate b draws from substream_seed(seed, b). Throws FitError when more
/// than 5% of the bootstrap refits fail.
GofReport ks_bootstrap_test(const Sample& sample, const MethodSpec& method, int B,
                            std::uint64_t seed, int threads = 1);

}  // namespace gemdpde
