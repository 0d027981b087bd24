#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gemdpde/fit.hpp"
#include "gemdpde/gedist.hpp"

namespace gemdpde {

/// Point-mass contamination: round(n * proportion) observations, at indices
/// drawn at random per replication, are replaced by outlier_value.
struct ContaminationSpec {
  double proportion = 0.0;
  double outlier_value = 1.0;
  std::string scenario_label;

  void validate() const;
};

/// The return level ge_quantile(return_level_prob, truth).
double make_outlier_value(const GEParams& truth, double return_level_prob);

/// Number of observations replaced in a sample of size n.
std::size_t contaminated_count(std::size_t n, double proportion);

struct SimCell {
  std::string method;     // MethodSpec::label()
  std::string parameter;  // "lambda" or "nu"
  double proportion = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  double bias_se = 0.0;   // Monte Carlo standard error of the bias
  int successes = 0;
  int failures = 0;

  friend bool operator==(const SimCell&, const SimCell&) = default;
};

struct SimTable {
  std::vector<SimCell> rows;
  int replications = 0;
  int n = 0;
  GEParams truth{1.0, 1.5};
  std::uint64_t seed = 0;
  std::string scenario_label;
  double outlier_value = 0.0;

  friend bool operator==(const SimTable&, const SimTable&) = default;

  /// Row for (method label, parameter, proportion); throws std::out_of_range.
  const SimCell& cell(const std::string& method, const std::string& parameter,
                      double proportion) const;
};

/// Runs `reps` replications: draw n points from truth, contaminate, fit every
/// method, and aggregate bias/MSE over the converged fits. Replication r
/// uses substream_seed(seed, r), so the clean draws are shared across
/// contamination levels and the table is independent of the thread count.
SimTable run_contamination_study(const GEParams& truth, int n, int reps,
                                 const ContaminationSpec& spec,
                                 const std::vector<MethodSpec>& methods, std::uint64_t seed,
                                 int threads = 1);

/// One study per proportion, rows concatenated in the given order.
SimTable run_contamination_grid(const GEParams& truth, int n, int reps, double outlier_value,
                                const std::string& scenario_label,
                                const std::vector<double>& proportions,
                                const std::vector<MethodSpec>& methods, std::uint64_t seed,
                                int threads = 1);

/// One row per cell, numbers with 17 significant digits.
std::string to_csv(const SimTable& table);

/// Method x parameter rows, bias/MSE column pairs per outlier percentage,
/// 4 decimals.
std::string to_text_table(const SimTable& table);

}  // namespace gemdpde
