#include "gemdpde/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "gemdpde/specfun.hpp"

namespace gemdpde {

namespace {

constexpr double kLogNuLo = -6.907755278982137;   // log 1e-3
constexpr double kLogNuHi = 6.907755278982137;    // log 1e3
constexpr int kMaxExpansions = 6;

double sample_mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Solves shape_fn(nu) = target over log(nu), widening [1e-3, 1e3] by a
// factor of 10 on each side until a sign change appears.
double solve_shape(const std::function<double(double)>& shape_fn, double target,
                   const char* what) {
  auto g = [&](double log_nu) { return shape_fn(std::exp(log_nu)) - target; };
  double lo = kLogNuLo;
  double hi = kLogNuHi;
  for (int k = 0; k <= kMaxExpansions; ++k) {
    const double glo = g(lo);
    const double ghi = g(hi);
    if (std::isfinite(glo) && std::isfinite(ghi) && (glo > 0.0) != (ghi > 0.0)) {
      return std::exp(root_1d(g, lo, hi, 1e-14));
    }
    lo -= std::log(10.0);
    hi += std::log(10.0);
  }
  throw FitError(std::string(what) + ": sample statistic " + std::to_string(target) +
                 " is outside the range attainable by the GE family");
}

FitResult fit_least_squares(const Sample& sample, Method method,
                            const std::function<double(std::span<const double>, const GEParams&)>&
                                objective) {
  validate_sample(sample);
  const std::vector<double> sorted = sample.sorted();
  const GEParams start = starting_values(sample);
  auto f = [&](double lambda, double nu) { return objective(sorted, GEParams(lambda, nu)); };
  OptimResult optim = minimize_2d(f, {start.lambda(), start.nu()});
  GEParams params(optim.argmin[0], optim.argmin[1]);
  return FitResult{method, params, std::nullopt, optim.objective_value, std::move(optim)};
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::ML: return "ML";
    case Method::MM: return "MM";
    case Method::PT: return "PT";
    case Method::LS: return "LS";
    case Method::WLS: return "WLS";
    case Method::LM: return "LM";
    case Method::MDPDE: return "MDPDE";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Method m : {Method::ML, Method::MM, Method::PT, Method::LS, Method::WLS, Method::LM,
                   Method::MDPDE}) {
    if (method_name(m) == upper) return m;
  }
  throw std::invalid_argument("unknown estimation method '" + std::string(name) + "'");
}

double mean_log_likelihood(std::span<const double> values, const GEParams& params) {
  double sum = 0.0;
  for (double x : values) sum += ge_log_pdf(x, params);
  return sum / static_cast<double>(values.size());
}

std::array<double, 2> mean_score(std::span<const double> values, const GEParams& params) {
  const double lambda = params.lambda();
  const double nu = params.nu();
  double d_lambda = 0.0;
  double d_nu = 0.0;
  for (double x : values) {
    const double lx = lambda * x;
    // x e^{-lx} / (1 - e^{-lx}) = x / expm1(lx)
    d_lambda += 1.0 / lambda - x + (nu - 1.0) * x / std::expm1(lx);
    d_nu += 1.0 / nu + log1mexp(lx);
  }
  const double n = static_cast<double>(values.size());
  return {d_lambda / n, d_nu / n};
}

double ml_nu_given_lambda(std::span<const double> values, double lambda) {
  double s = 0.0;
  for (double x : values) s += log1mexp(lambda * x);
  return -static_cast<double>(values.size()) / s;
}

FitResult fit_ml(const Sample& sample) {
  validate_sample(sample);
  const std::span<const double> x(sample.values);
  if (all_equal(x)) throw FitError("fit_ml: all observations are equal");
  const double n = static_cast<double>(x.size());
  const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
  const double mean = sum_x / n;

  // Negative mean profile log-likelihood as a function of log(lambda).
  auto neg_profile = [&](double log_lambda) {
    const double lambda = std::exp(log_lambda);
    double s = 0.0;
    for (double v : x) s += log1mexp(lambda * v);
    const double nu = -n / s;
    return -(std::log(lambda) + std::log(nu) - lambda * mean - 1.0 - s / n);
  };
  // Profile score d/dlambda at (lambda, nu_hat(lambda)); zero at the MLE.
  auto profile_score = [&](double lambda) {
    const double nu = ml_nu_given_lambda(x, lambda);
    double w = 0.0;
    for (double v : x) w += v / std::expm1(lambda * v);
    return 1.0 / lambda - mean + (nu - 1.0) * w / n;
  };

  // Coarse scan over a geometric grid, widened until the best point is interior.
  double lo = std::log(0.01 / mean);
  double hi = std::log(100.0 / mean);
  constexpr int kGrid = 40;
  int best = 0;
  double step = 0.0;
  for (int expansion = 0;; ++expansion) {
    step = (hi - lo) / kGrid;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kGrid; ++i) {
      const double v = neg_profile(lo + step * i);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    if (best > 0 && best < kGrid) break;
    if (expansion == kMaxExpansions) {
      throw FitError("fit_ml: profile likelihood has no interior maximum");
    }
    if (best == 0) lo -= (hi - lo); else hi += (hi - lo);
  }

  OptimResult optim = minimize_1d(neg_profile, lo + step * (best - 1), lo + step * (best + 1));
  if (optim.argmin.empty()) throw FitError("fit_ml: " + optim.message);
  double lambda = std::exp(optim.argmin[0]);

  // Polish on the profile score; the likelihood is too flat near its maximum
  // to locate lambda beyond ~sqrt(eps) from values alone.
  const double a = lambda * std::exp(-2.0 * step);
  const double b = lambda * std::exp(2.0 * step);
  const double sa = profile_score(a);
  const double sb = profile_score(b);
  if (std::isfinite(sa) && std::isfinite(sb) && (sa > 0.0) != (sb > 0.0)) {
    lambda = root_1d(profile_score, a, b, 1e-15);
  }
  GEParams params(lambda, ml_nu_given_lambda(x, lambda));
  optim.argmin = {params.lambda(), params.nu()};
  optim.objective_value = -mean_log_likelihood(x, params);
  return FitResult{Method::ML, params, std::nullopt, optim.objective_value, std::move(optim)};
}

double ge_cv(double nu) {
  return std::sqrt(trigamma(1.0) - trigamma(nu + 1.0)) / (digamma(nu + 1.0) - digamma(1.0));
}

double ge_l_ratio(double nu) {
  return (digamma(2.0 * nu + 1.0) - digamma(nu + 1.0)) / (digamma(nu + 1.0) - digamma(1.0));
}

FitResult fit_mm(const Sample& sample) {
  validate_sample(sample);
  const std::span<const double> x(sample.values);
  const double mean = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  if (!(sd > 0.0)) throw FitError("fit_mm: sample standard deviation is zero");

  const double nu = solve_shape(ge_cv, sd / mean, "fit_mm");
  const double lambda = (digamma(nu + 1.0) - digamma(1.0)) / mean;
  OptimResult optim;
  optim.argmin = {lambda, nu};
  optim.converged = true;
  optim.objective_value = ge_cv(nu) - sd / mean;
  optim.tolerance_achieved = std::abs(optim.objective_value);
  return FitResult{Method::MM, GEParams(lambda, nu), std::nullopt, optim.objective_value,
                   std::move(optim)};
}

FitResult fit_lm(const Sample& sample) {
  validate_sample(sample, 3);
  const std::vector<double> sorted = sample.sorted();
  const double n = static_cast<double>(sorted.size());
  const double mean = sample_mean(sorted);
  double weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) weighted += static_cast<double>(i) * sorted[i];
  const double l2 = 2.0 * weighted / (n * (n - 1.0)) - mean;
  if (!(l2 > 0.0)) throw FitError("fit_lm: second sample L-moment is not positive");

  const double nu = solve_shape(ge_l_ratio, l2 / mean, "fit_lm");
  const double lambda = (digamma(nu + 1.0) - digamma(1.0)) / mean;
  OptimResult optim;
  optim.argmin = {lambda, nu};
  optim.converged = true;
  optim.objective_value = ge_l_ratio(nu) - l2 / mean;
  optim.tolerance_achieved = std::abs(optim.objective_value);
  return FitResult{Method::LM, GEParams(lambda, nu), std::nullopt, optim.objective_value,
                   std::move(optim)};
}

double pt_objective(std::span<const double> sorted, const GEParams& params) {
  const double n1 = static_cast<double>(sorted.size()) + 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double r = sorted[i] - ge_quantile(static_cast<double>(i + 1) / n1, params);
    sum += r * r;
  }
  return sum;
}

double ls_objective(std::span<const double> sorted, const GEParams& params,
                    std::span<const double> weights) {
  const double n1 = static_cast<double>(sorted.size()) + 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double r = static_cast<double>(i + 1) / n1 - ge_cdf(sorted[i], params);
    sum += (weights.empty() ? 1.0 : weights[i]) * r * r;
  }
  return sum;
}

std::vector<double> wls_weights(std::size_t n) {
  const double nd = static_cast<double>(n);
  std::vector<double> w(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double id = static_cast<double>(i);
    w[i - 1] = (nd + 1.0) * (nd + 1.0) * (nd + 2.0) / (id * (nd - id + 1.0));
  }
  return w;
}

GEParams starting_values(const Sample& sample) {
  try {
    return fit_mm(sample).params;
  } catch (const FitError&) {
    return GEParams(1.0 / sample_mean(sample.values), 1.0);
  }
}

FitResult fit_pt(const Sample& sample) {
  return fit_least_squares(sample, Method::PT, pt_objective);
}

FitResult fit_ls(const Sample& sample) {
  return fit_least_squares(sample, Method::LS, [](std::span<const double> s, const GEParams& p) {
    return ls_objective(s, p);
  });
}

FitResult fit_wls(const Sample& sample) {
  const std::vector<double> weights = wls_weights(sample.size());
  return fit_least_squares(sample, Method::WLS,
                           [&](std::span<const double> s, const GEParams& p) {
                             return ls_objective(s, p, weights);
                           });
}

}  // namespace gemdpde
