#include "gemdpde/mdpde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gemdpde/parallel.hpp"
#include "gemdpde/specfun.hpp"

namespace gemdpde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
}

// Closed-form common factor B(1+alpha, (1+alpha)(nu-1)+1), in logs.
double log_beta_term(double nu, double alpha) {
  return log_beta(1.0 + alpha, (1.0 + alpha) * (nu - 1.0) + 1.0);
}

}  // namespace

void DpdConfig::validate() const {
  require_alpha(alpha);
  if (!(tolerance > 0.0)) throw std::invalid_argument("DpdConfig: tolerance must be positive");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_alpha(grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("DpdConfig: alpha grid must be strictly increasing");
    }
  }
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid(51);
  for (int i = 0; i <= 50; ++i) grid[i] = i / 50.0;
  return grid;
}

double nu_threshold(double alpha) { return alpha / (1.0 + alpha); }

double integral_density_power(const GEParams& params, double alpha) {
  require_alpha(alpha);
  if (params.nu() <= nu_threshold(alpha)) return kInf;
  return std::exp(alpha * std::log(params.lambda()) + (1.0 + alpha) * std::log(params.nu()) +
                  log_beta_term(params.nu(), alpha));
}

double v_alpha(double x, const GEParams& params, double alpha) {
  require_alpha(alpha);
  if (alpha == 0.0) return -ge_log_pdf(x, params);
  const double f_alpha = std::exp(alpha * ge_log_pdf(x, params));
  return integral_density_power(params, alpha) - (1.0 + 1.0 / alpha) * f_alpha;
}

double h_objective(std::span<const double> values, const GEParams& params, double alpha) {
  require_alpha(alpha);
  const double lambda = params.lambda();
  const double nu = params.nu();
  const double n = static_cast<double>(values.size());
  if (alpha == 0.0) {
    double sum = 0.0;
    for (double x : values) {
      const double lx = lambda * x;
      sum += -lx + (nu - 1.0) * log1mexp(lx);
    }
    return -(std::log(lambda * nu) + sum / n);
  }
  const double integral = integral_density_power(params, alpha);
  if (!std::isfinite(integral)) return kInf;
  double sum = 0.0;
  for (double x : values) {
    const double lx = lambda * x;
    sum += std::exp(alpha * (-lx + (nu - 1.0) * log1mexp(lx)));
  }
  const double scale = std::pow(lambda * nu, alpha);
  return integral - (1.0 + 1.0 / alpha) * scale * sum / n;
}

std::array<double, 2> score_vector(double x, const GEParams& params) {
  if (!(x > 0.0)) throw std::domain_error("score_vector: x must be positive");
  const double lambda = params.lambda();
  const double nu = params.nu();
  const double lx = lambda * x;
  return {1.0 / lambda - x + (nu - 1.0) * x / std::expm1(lx), 1.0 / nu + log1mexp(lx)};
}

std::array<double, 2> weighted_score_integral(const GEParams& params, double alpha) {
  require_alpha(alpha);
  const double lambda = params.lambda();
  const double nu = params.nu();
  if (nu <= nu_threshold(alpha)) {
    throw std::domain_error("weighted_score_integral: requires nu > alpha/(1+alpha)");
  }
  const double c = (1.0 + alpha) * (nu - 1.0) + 1.0;
  const double b = (1.0 + alpha) * nu + 1.0;
  const double common = std::exp((alpha - 1.0) * std::log(lambda) + alpha * std::log(nu) +
                                 log_beta_term(nu, alpha));
  return {common * nu * (1.0 + digamma(1.0 + alpha) - digamma(2.0 + alpha)),
          common * lambda * (1.0 + nu * (digamma(c) - digamma(b)))};
}

std::array<double, 2> estimating_equations(std::span<const double> values,
                                           const GEParams& params, double alpha) {
  const auto integral = weighted_score_integral(params, alpha);
  const double lambda = params.lambda();
  const double nu = params.nu();
  const double scale = std::pow(lambda * nu, alpha);
  double s_lambda = 0.0;
  double s_nu = 0.0;
  for (double x : values) {
    const double lx = lambda * x;
    const double log_s = log1mexp(lx);
    const double weight = alpha == 0.0 ? 1.0 : scale * std::exp(alpha * (-lx + (nu - 1.0) * log_s));
    s_lambda += (1.0 / lambda - x + (nu - 1.0) * x / std::expm1(lx)) * weight;
    s_nu += (1.0 / nu + log_s) * weight;
  }
  const double n = static_cast<double>(values.size());
  return {s_lambda / n - integral[0], s_nu / n - integral[1]};
}

FitResult fit_mdpde(const Sample& sample, double alpha, std::optional<GEParams> start) {
  require_alpha(alpha);
  validate_sample(sample);
  GEParams init = start ? *start : starting_values(sample);
  if (init.nu() <= nu_threshold(alpha)) init = GEParams(init.lambda(), 1.0);
  const std::span<const double> x(sample.values);
  auto objective = [&](double lambda, double nu) {
    return h_objective(x, GEParams(lambda, nu), alpha);
  };
  OptimResult optim = minimize_2d(objective, {init.lambda(), init.nu()});
  GEParams params(optim.argmin[0], optim.argmin[1]);
  return FitResult{Method::MDPDE, params, alpha, optim.objective_value, std::move(optim)};
}

CvmCurve select_alpha_cvm(const Sample& sample, const std::vector<double>& grid, int threads) {
  validate_sample(sample, 5);
  if (grid.empty()) throw std::invalid_argument("select_alpha_cvm: empty alpha grid");
  DpdConfig{0.0, grid}.validate();

  const std::vector<double> sorted = sample.sorted();
  const std::size_t n = sorted.size();
  const std::size_t m = grid.size();

  Sample full;
  full.values = sorted;
  std::vector<std::optional<GEParams>> full_fit(m);
  parallel_for(m, threads, [&](std::size_t a) {
    try {
      FitResult r = fit_mdpde(full, grid[a]);
      if (r.optim.converged) full_fit[a] = r.params;
    } catch (const std::exception&) {
    }
  });

  // contribution[a * n + i]; NaN marks a failed leave-one-out fit
  std::vector<double> contribution(m * n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(m * n, threads, [&](std::size_t job) {
    const std::size_t a = job / n;
    const std::size_t i = job % n;
    if (!full_fit[a]) return;
    Sample reduced;
    reduced.values.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) reduced.values.push_back(sorted[j]);
    try {
      FitResult r = fit_mdpde(reduced, grid[a], full_fit[a]);
      if (!r.optim.converged) return;
      const double resid =
          static_cast<double>(i + 1) / static_cast<double>(n + 1) - ge_cdf(sorted[i], r.params);
      contribution[job] = resid * resid;
    } catch (const std::exception&) {
    }
  });

  CvmCurve curve;
  curve.alphas = grid;
  curve.distances.resize(m);
  curve.failed.resize(m);
  double best = kInf;
  for (std::size_t a = 0; a < m; ++a) {
    double sum = 0.0;
    bool failed = !full_fit[a];
    for (std::size_t i = 0; i < n && !failed; ++i) {
      const double c = contribution[a * n + i];
      if (std::isnan(c)) failed = true; else sum += c;
    }
    curve.failed[a] = failed;
    curve.distances[a] = failed ? std::numeric_limits<double>::quiet_NaN()
                                : sum / static_cast<double>(n);
    if (!failed && curve.distances[a] < best) {
      best = curve.distances[a];
      curve.optimal_index = a;
    }
  }
  if (!std::isfinite(best)) {
    throw FitError("select_alpha_cvm: every alpha in the grid failed");
  }
  curve.optimal_alpha = grid[curve.optimal_index];
  return curve;
}

}  // namespace gemdpde
