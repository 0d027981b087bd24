#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gemdpde {

/// Rate and shape of GE(lambda, nu) with cdf (1 - exp(-lambda x))^nu.
class GEParams {
 public:
  /// Throws std::invalid_argument unless both are positive and finite.
  GEParams(double lambda, double nu);

  double lambda() const { return lambda_; }
  double nu() const { return nu_; }

  friend bool operator==(const GEParams&, const GEParams&) = default;

 private:
  double lambda_;
  double nu_;
};

struct MomentSummary {
  double mean;
  double variance;
  double skewness;
};

/// Observations with optional provenance.
struct Sample {
  std::vector<double> values;
  std::optional<std::string> label;
  std::optional<std::string> period;

  std::size_t size() const { return values.size(); }
  std::vector<double> sorted() const;
};

/// Throws std::invalid_argument if the sample has fewer than min_size values
/// or any value that is not strictly positive and finite.
void validate_sample(const Sample& sample, std::size_t min_size = 3);

/// log(1 - exp(-y)) for y > 0 without cancellation at either end.
double log1mexp(double y);

double ge_pdf(double x, const GEParams& params);
double ge_log_pdf(double x, const GEParams& params);
double ge_cdf(double x, const GEParams& params);
double ge_quantile(double p, const GEParams& params);
MomentSummary ge_moments(const GEParams& params);

/// n inverse-cdf draws; identical seeds give identical samples.
Sample ge_sample(std::size_t n, const GEParams& params, std::uint64_t seed);

class Rng;
/// Fills `out` with inverse-cdf draws from an existing generator.
void ge_fill(std::vector<double>& out, const GEParams& params, Rng& rng);

}  // namespace gemdpde
