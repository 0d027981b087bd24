#include "gemdpde/gedist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gemdpde/rng.hpp"
#include "gemdpde/specfun.hpp"

namespace gemdpde {

GEParams::GEParams(double lambda, double nu) : lambda_(lambda), nu_(nu) {
  if (!std::isfinite(lambda) || !std::isfinite(nu) || lambda <= 0.0 || nu <= 0.0) {
    throw std::invalid_argument("GEParams: lambda and nu must be positive and finite (got " +
                                std::to_string(lambda) + ", " + std::to_string(nu) + ")");
  }
}

std::vector<double> Sample::sorted() const {
  std::vector<double> out = values;
  std::sort(out.begin(), out.end());
  return out;
}

void validate_sample(const Sample& sample, std::size_t min_size) {
  if (sample.size() < min_size) {
    throw std::invalid_argument("sample needs at least " + std::to_string(min_size) +
                                " observations, got " + std::to_string(sample.size()));
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double v = sample.values[i];
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("sample value " + std::to_string(i) +
                                  " is not strictly positive and finite");
    }
  }
}

double log1mexp(double y) {
  return y <= std::numbers::ln2 ? std::log(-std::expm1(-y)) : std::log1p(-std::exp(-y));
}

namespace {

void require_positive_x(double x, const char* what) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(what) + ": x must be positive");
  }
}

}  // namespace

double ge_log_pdf(double x, const GEParams& params) {
  require_positive_x(x, "ge_log_pdf");
  const double lx = params.lambda() * x;
  return std::log(params.lambda() * params.nu()) - lx + (params.nu() - 1.0) * log1mexp(lx);
}

double ge_pdf(double x, const GEParams& params) {
  require_positive_x(x, "ge_pdf");
  if (params.lambda() * x > 700.0) return 0.0;
  return std::exp(ge_log_pdf(x, params));
}

double ge_cdf(double x, const GEParams& params) {
  require_positive_x(x, "ge_cdf");
  return std::exp(params.nu() * log1mexp(params.lambda() * x));
}

double ge_quantile(double p, const GEParams& params) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("ge_quantile: p must lie in (0, 1)");
  }
  // log(1 - p^(1/nu)) = log1mexp(-log(p)/nu)
  return -log1mexp(-std::log(p) / params.nu()) / params.lambda();
}

MomentSummary ge_moments(const GEParams& params) {
  const double nu1 = params.nu() + 1.0;
  const double spread = trigamma(1.0) - trigamma(nu1);
  const double lambda = params.lambda();
  return {(digamma(nu1) - digamma(1.0)) / lambda, spread / (lambda * lambda),
          (tetragamma(nu1) - tetragamma(1.0)) / std::pow(spread, 1.5)};
}

void ge_fill(std::vector<double>& out, const GEParams& params, Rng& rng) {
  for (double& v : out) v = ge_quantile(rng.uniform_open(), params);
}

Sample ge_sample(std::size_t n, const GEParams& params, std::uint64_t seed) {
  Rng rng(seed);
  Sample sample;
  sample.values.resize(n);
  ge_fill(sample.values, params, rng);
  return sample;
}

}  // namespace gemdpde
