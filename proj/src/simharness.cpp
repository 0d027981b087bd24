#include "gemdpde/simharness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

#include "gemdpde/parallel.hpp"
#include "gemdpde/rng.hpp"

namespace gemdpde {

void ContaminationSpec::validate() const {
  if (!(proportion >= 0.0 && proportion < 1.0)) {
    throw std::invalid_argument("contamination proportion must lie in [0, 1)");
  }
  if (!(outlier_value > 0.0) || !std::isfinite(outlier_value)) {
    throw std::invalid_argument("outlier value must be positive and finite");
  }
}

double make_outlier_value(const GEParams& truth, double return_level_prob) {
  return ge_quantile(return_level_prob, truth);
}

std::size_t contaminated_count(std::size_t n, double proportion) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * proportion));
}

const SimCell& SimTable::cell(const std::string& method, const std::string& parameter,
                              double proportion) const {
  for (const auto& row : rows) {
    if (row.method == method && row.parameter == parameter &&
        std::abs(row.proportion - proportion) < 1e-12) {
      return row;
    }
  }
  throw std::out_of_range("SimTable: no cell for " + method + "/" + parameter);
}

SimTable run_contamination_study(const GEParams& truth, int n, int reps,
                                 const ContaminationSpec& spec,
                                 const std::vector<MethodSpec>& methods, std::uint64_t seed,
                                 int threads) {
  spec.validate();
  if (reps < 1) throw std::invalid_argument("run_contamination_study: reps must be >= 1");
  if (n < 5) throw std::invalid_argument("run_contamination_study: n must be >= 5");
  if (methods.empty()) throw std::invalid_argument("run_contamination_study: no methods");

  const std::size_t m = methods.size();
  const std::size_t k = contaminated_count(static_cast<std::size_t>(n), spec.proportion);
  // estimates[r * m + j]
  std::vector<std::optional<GEParams>> estimates(static_cast<std::size_t>(reps) * m);

  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    Rng rng(substream_seed(seed, r));
    Sample sample;
    sample.values.resize(static_cast<std::size_t>(n));
    ge_fill(sample.values, truth, rng);
    // partial Fisher-Yates over the indices picks k distinct positions
    std::vector<std::size_t> idx(sample.values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.below(idx.size() - i);
      std::swap(idx[i], idx[j]);
      sample.values[idx[i]] = spec.outlier_value;
    }
    for (std::size_t j = 0; j < m; ++j) {
      try {
        const FitResult fitted = fit(methods[j], sample, 1);
        if (fitted.optim.converged) estimates[r * m + j] = fitted.params;
      } catch (const std::exception&) {
      }
    }
  });

  SimTable table;
  table.replications = reps;
  table.n = n;
  table.truth = truth;
  table.seed = seed;
  table.scenario_label = spec.scenario_label;
  table.outlier_value = spec.outlier_value;
  for (std::size_t j = 0; j < m; ++j) {
    for (int p = 0; p < 2; ++p) {
      const double target = p == 0 ? truth.lambda() : truth.nu();
      double sum = 0.0;
      double sum_sq = 0.0;
      int ok = 0;
      for (std::size_t r = 0; r < static_cast<std::size_t>(reps); ++r) {
        const auto& e = estimates[r * m + j];
        if (!e) continue;
        const double err = (p == 0 ? e->lambda() : e->nu()) - target;
        sum += err;
        sum_sq += err * err;
        ++ok;
      }
      SimCell cell;
      cell.method = methods[j].label();
      cell.parameter = p == 0 ? "lambda" : "nu";
      cell.proportion = spec.proportion;
      cell.successes = ok;
      cell.failures = reps - ok;
      if (ok > 0) {
        cell.bias = sum / ok;
        cell.mse = sum_sq / ok;
        const double var = ok > 1 ? (sum_sq - ok * cell.bias * cell.bias) / (ok - 1) : 0.0;
        cell.bias_se = std::sqrt(std::max(0.0, var) / ok);
      } else {
        cell.bias = cell.mse = cell.bias_se = std::numeric_limits<double>::quiet_NaN();
      }
      table.rows.push_back(cell);
    }
  }
  return table;
}

SimTable run_contamination_grid(const GEParams& truth, int n, int reps, double outlier_value,
                                const std::string& scenario_label,
                                const std::vector<double>& proportions,
                                const std::vector<MethodSpec>& methods, std::uint64_t seed,
                                int threads) {
  if (proportions.empty()) throw std::invalid_argument("run_contamination_grid: no proportions");
  SimTable merged;
  for (double p : proportions) {
    SimTable t = run_contamination_study(truth, n, reps,
                                         ContaminationSpec{p, outlier_value, scenario_label},
                                         methods, seed, threads);
    if (merged.rows.empty()) {
      merged = std::move(t);
    } else {
      merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
    }
  }
  return merged;
}

std::string to_csv(const SimTable& table) {
  std::string out =
      "scenario,method,parameter,outlier_pct,bias,mse,bias_se,successes,failures\n";
  for (const auto& c : table.rows) {
    out += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n", table.scenario_label,
                       c.method, c.parameter, 100.0 * c.proportion, c.bias, c.mse, c.bias_se,
                       c.successes, c.failures);
  }
  return out;
}

std::string to_text_table(const SimTable& table) {
  std::vector<double> proportions;
  std::vector<std::string> methods;
  for (const auto& c : table.rows) {
    if (std::find(proportions.begin(), proportions.end(), c.proportion) == proportions.end())
      proportions.push_back(c.proportion);
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
      methods.push_back(c.method);
  }
  std::string out = fmt::format(
      "Scenario {}: outlier value {:.4f}, truth GE({:g}, {:g}), n = {}, {} replications\n",
      table.scenario_label, table.outlier_value, table.truth.lambda(), table.truth.nu(), table.n,
      table.replications);
  out += fmt::format("{:<12} {:<7}", "Method", "theta");
  for (double p : proportions) out += fmt::format(" | {:>8} {:>8}", fmt::format("{:g}%", 100 * p), "");
  out += "\n";
  out += fmt::format("{:<12} {:<7}", "", "");
  for (std::size_t i = 0; i < proportions.size(); ++i) out += fmt::format(" | {:>8} {:>8}", "Bias", "MSE");
  out += "\n";
  for (const auto& m : methods) {
    for (const char* param : {"lambda", "nu"}) {
      out += fmt::format("{:<12} {:<7}", std::string(param) == "lambda" ? m : "", param);
      for (double p : proportions) {
        const SimCell& c = table.cell(m, param, p);
        out += fmt::format(" | {:>8.4f} {:>8.4f}", c.bias, c.mse);
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace gemdpde
