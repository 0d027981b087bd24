#include "gemdpde/diagnostics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gemdpde/parallel.hpp"
#include "gemdpde/rng.hpp"

namespace gemdpde {

namespace {

double median_of_sorted(std::span<const double> s) {
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

bool fit_ok(const FitResult& r) { return r.optim.converged; }

}  // namespace

TrendResult trend_test(const Sample& sample, std::span<const double> times) {
  const std::size_t n = sample.size();
  if (n < 3) throw std::invalid_argument("trend_test: need at least 3 points");
  if (times.size() != n) throw std::invalid_argument("trend_test: times and values differ in length");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("trend_test: times must be strictly increasing");
    }
  }
  const double nd = static_cast<double>(n);
  const double t_mean = std::accumulate(times.begin(), times.end(), 0.0) / nd;
  const double y_mean = std::accumulate(sample.values.begin(), sample.values.end(), 0.0) / nd;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (times[i] - t_mean) * (times[i] - t_mean);
    sxy += (times[i] - t_mean) * (sample.values[i] - y_mean);
  }
  TrendResult result;
  result.slope = sxy / sxx;
  result.intercept = y_mean - result.slope * t_mean;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = sample.values[i] - result.intercept - result.slope * times[i];
    sse += r * r;
  }
  const double se = std::sqrt(sse / (nd - 2.0) / sxx);
  if (!(se > 0.0)) {
    result.t_statistic = result.slope == 0.0 ? 0.0 : std::copysign(INFINITY, result.slope);
    result.p_value = result.slope == 0.0 ? 1.0 : 0.0;
    return result;
  }
  result.t_statistic = result.slope / se;
  boost::math::students_t_distribution<double> dist(nd - 2.0);
  result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(result.t_statistic)));
  return result;
}

double trend_pvalue(const Sample& sample, std::span<const double> times) {
  return trend_test(sample, times).p_value;
}

AcfPacf acf_pacf(const Sample& sample, int max_lag) {
  const std::size_t n = sample.size();
  if (max_lag < 1 || 2 * static_cast<std::size_t>(max_lag) >= n) {
    throw std::invalid_argument("acf_pacf: need 1 <= max_lag < n/2");
  }
  const auto& x = sample.values;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  if (!(c0 > 0.0)) throw std::invalid_argument("acf_pacf: sample has zero variance");

  AcfPacf out;
  out.acf.resize(max_lag);
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) ck += (x[t] - mean) * (x[t + k] - mean);
    out.acf[k - 1] = ck / c0;
  }

  // Durbin-Levinson
  out.pacf.resize(max_lag);
  std::vector<double> phi(max_lag + 1, 0.0);
  std::vector<double> prev(max_lag + 1, 0.0);
  double v = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double num = out.acf[k - 1];
    for (int j = 1; j < k; ++j) num -= prev[j] * out.acf[k - j - 1];
    const double phikk = num / v;
    phi[k] = phikk;
    for (int j = 1; j < k; ++j) phi[j] = prev[j] - phikk * prev[k - j];
    v *= (1.0 - phikk * phikk);
    out.pacf[k - 1] = phikk;
    prev = phi;
  }
  return out;
}

double medcouple(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("medcouple: empty input");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double m = median_of_sorted(s);

  std::vector<double> lower;  // x - m <= 0, ascending
  std::vector<double> upper;  // x - m >= 0, ascending
  for (double v : s) {
    if (v - m <= 0.0) lower.push_back(v - m);
    if (v - m >= 0.0) upper.push_back(v - m);
  }
  const std::size_t ties = static_cast<std::size_t>(
      std::count_if(lower.begin(), lower.end(), [](double z) { return z == 0.0; }));

  std::vector<double> kernel;
  kernel.reserve(lower.size() * upper.size());
  for (std::size_t r = 0; r < upper.size(); ++r) {
    for (std::size_t c = 0; c < lower.size(); ++c) {
      const double zu = upper[r];
      const double zl = lower[c];
      if (zu == 0.0 && zl == 0.0) {
        // tied block: upper rows 0..ties-1 against lower columns n_l-ties..n_l-1
        const std::size_t cc = c - (lower.size() - ties);
        const std::size_t sum = r + cc;
        kernel.push_back(sum + 1 < ties ? -1.0 : (sum + 1 == ties ? 0.0 : 1.0));
      } else {
        kernel.push_back((zu + zl) / (zu - zl));
      }
    }
  }
  std::sort(kernel.begin(), kernel.end());
  return median_of_sorted(kernel);
}

std::array<double, 5> five_number_summary(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("five_number_summary: empty input");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  const double n4 = std::floor((n + 3.0) / 2.0) / 2.0;
  const std::array<double, 5> depth = {1.0, n4, (n + 1.0) / 2.0, n + 1.0 - n4, n};
  std::array<double, 5> out{};
  for (int k = 0; k < 5; ++k) {
    const auto lo = static_cast<std::size_t>(std::floor(depth[k])) - 1;
    const auto hi = static_cast<std::size_t>(std::ceil(depth[k])) - 1;
    out[k] = 0.5 * (s[lo] + s[hi]);
  }
  return out;
}

OutlierReport flag_outliers_adjusted_boxplot(const Sample& sample) {
  if (sample.size() < 4) throw std::invalid_argument("adjusted boxplot needs at least 4 values");
  OutlierReport report;
  const auto five = five_number_summary(sample.values);
  report.q1 = five[1];
  report.q3 = five[3];
  report.medcouple = medcouple(sample.values);
  const double iqr = report.q3 - report.q1;
  const double mc = report.medcouple;
  const double lo_exp = mc >= 0.0 ? -4.0 * mc : -3.0 * mc;
  const double hi_exp = mc >= 0.0 ? 3.0 * mc : 4.0 * mc;
  report.lower_fence = report.q1 - 1.5 * std::exp(lo_exp) * iqr;
  report.upper_fence = report.q3 + 1.5 * std::exp(hi_exp) * iqr;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double v = sample.values[i];
    if (v < report.lower_fence || v > report.upper_fence) report.flagged_indices.push_back(i);
  }
  return report;
}

Sample remove_flagged(const Sample& sample, const OutlierReport& report) {
  Sample out;
  out.label = sample.label;
  out.period = sample.period;
  std::size_t next = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (next < report.flagged_indices.size() && report.flagged_indices[next] == i) {
      ++next;
      continue;
    }
    out.values.push_back(sample.values[i]);
  }
  return out;
}

double ks_statistic(std::span<const double> values, const GEParams& params) {
  if (values.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = ge_cdf(s[i], params);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

GofReport ks_bootstrap_test(const Sample& sample, const MethodSpec& method, int B,
                            std::uint64_t seed, int threads) {
  if (B < 99) throw std::invalid_argument("ks_bootstrap_test: need B >= 99");
  const FitResult base = fit(method, sample, threads);
  if (!fit_ok(base)) throw FitError("ks_bootstrap_test: fit to the data did not converge");

  GofReport report;
  report.method = method.label();
  report.fitted = base.params;
  report.bootstrap_B = B;
  report.ks_statistic = ks_statistic(sample.values, base.params);

  std::vector<double> stats(B, std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t b) {
    Rng rng(substream_seed(seed, b));
    Sample draw;
    draw.values.resize(sample.size());
    ge_fill(draw.values, base.params, rng);
    try {
      const FitResult r = fit(method, draw, 1);
      if (fit_ok(r)) stats[b] = ks_statistic(draw.values, r.params);
    } catch (const std::exception&) {
    }
  });

  int exceed = 0;
  for (double d : stats) {
    if (std::isnan(d)) ++report.failures;
    else if (d >= report.ks_statistic) ++exceed;
  }
  if (report.failures > B / 20) {
    throw FitError("ks_bootstrap_test: " + std::to_string(report.failures) + " of " +
                   std::to_string(B) + " bootstrap refits failed");
  }
  report.p_value = (1.0 + exceed) / (static_cast<double>(B - report.failures) + 1.0);
  return report;
}

}  // namespace gemdpde
