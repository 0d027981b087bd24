#include <cmath>
#include <limits>

#include "gemdpde/cli.hpp"

namespace gemdpde::cli {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> nums(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(num(x));
  return v;
}

json vec2(const Vec2& v) { return json::array({num(v[0]), num(v[1])}); }
Vec2 vec2(const json& j) { return {num(j.at(0)), num(j.at(1))}; }

}  // namespace

json to_json(const GEParams& v) { return {{"lambda", v.lambda()}, {"nu", v.nu()}}; }

GEParams params_from_json(const json& j) {
  return GEParams(j.at("lambda").get<double>(), j.at("nu").get<double>());
}

json to_json(const OptimResult& v) {
  return {{"argmin", nums(v.argmin)},
          {"objective_value", num(v.objective_value)},
          {"iterations", v.iterations},
          {"converged", v.converged},
          {"tolerance_achieved", num(v.tolerance_achieved)},
          {"message", v.message}};
}

OptimResult optim_from_json(const json& j) {
  OptimResult r;
  r.argmin = nums(j.at("argmin"));
  r.objective_value = num(j.at("objective_value"));
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.tolerance_achieved = num(j.at("tolerance_achieved"));
  r.message = j.at("message").get<std::string>();
  return r;
}

json to_json(const FitResult& v) {
  return {{"method", std::string(method_name(v.method))},
          {"params", to_json(v.params)},
          {"alpha", v.alpha ? num(*v.alpha) : json(nullptr)},
          {"objective_value", num(v.objective_value)},
          {"optim", to_json(v.optim)}};
}

FitResult fit_from_json(const json& j) {
  std::optional<double> alpha;
  if (!j.at("alpha").is_null()) alpha = j.at("alpha").get<double>();
  return FitResult{parse_method(j.at("method").get<std::string>()),
                   params_from_json(j.at("params")), alpha, num(j.at("objective_value")),
                   optim_from_json(j.at("optim"))};
}

json to_json(const CvmCurve& v) {
  return {{"alphas", nums(v.alphas)},
          {"distances", nums(v.distances)},
          {"failed", v.failed},
          {"optimal_alpha", v.optimal_alpha},
          {"optimal_index", v.optimal_index}};
}

CvmCurve cvm_from_json(const json& j) {
  CvmCurve c;
  c.alphas = nums(j.at("alphas"));
  c.distances = nums(j.at("distances"));
  c.failed = j.at("failed").get<std::vector<bool>>();
  c.optimal_alpha = j.at("optimal_alpha").get<double>();
  c.optimal_index = j.at("optimal_index").get<std::size_t>();
  return c;
}

json to_json(const TrendResult& v) {
  return {{"slope", num(v.slope)},
          {"intercept", num(v.intercept)},
          {"t_statistic", num(v.t_statistic)},
          {"p_value", num(v.p_value)}};
}

TrendResult trend_from_json(const json& j) {
  return TrendResult{num(j.at("slope")), num(j.at("intercept")), num(j.at("t_statistic")),
                     num(j.at("p_value"))};
}

json to_json(const AcfPacf& v) { return {{"acf", nums(v.acf)}, {"pacf", nums(v.pacf)}}; }

AcfPacf acf_from_json(const json& j) { return AcfPacf{nums(j.at("acf")), nums(j.at("pacf"))}; }

json to_json(const OutlierReport& v) {
  return {{"flagged_indices", v.flagged_indices},
          {"lower_fence", num(v.lower_fence)},
          {"upper_fence", num(v.upper_fence)},
          {"medcouple", num(v.medcouple)},
          {"q1", num(v.q1)},
          {"q3", num(v.q3)}};
}

OutlierReport outliers_from_json(const json& j) {
  OutlierReport r;
  r.flagged_indices = j.at("flagged_indices").get<std::vector<std::size_t>>();
  r.lower_fence = num(j.at("lower_fence"));
  r.upper_fence = num(j.at("upper_fence"));
  r.medcouple = num(j.at("medcouple"));
  r.q1 = num(j.at("q1"));
  r.q3 = num(j.at("q3"));
  return r;
}

json to_json(const GofReport& v) {
  return {{"ks_statistic", num(v.ks_statistic)},
          {"p_value", num(v.p_value)},
          {"bootstrap_B", v.bootstrap_B},
          {"failures", v.failures},
          {"method", v.method},
          {"fitted", to_json(v.fitted)}};
}

GofReport gof_from_json(const json& j) {
  GofReport r;
  r.ks_statistic = num(j.at("ks_statistic"));
  r.p_value = num(j.at("p_value"));
  r.bootstrap_B = j.at("bootstrap_B").get<int>();
  r.failures = j.at("failures").get<int>();
  r.method = j.at("method").get<std::string>();
  r.fitted = params_from_json(j.at("fitted"));
  return r;
}

json to_json(const SimTable& v) {
  json rows = json::array();
  for (const auto& c : v.rows) {
    rows.push_back({{"method", c.method},
                    {"parameter", c.parameter},
                    {"proportion", c.proportion},
                    {"bias", num(c.bias)},
                    {"mse", num(c.mse)},
                    {"bias_se", num(c.bias_se)},
                    {"successes", c.successes},
                    {"failures", c.failures}});
  }
  return {{"rows", rows},
          {"replications", v.replications},
          {"n", v.n},
          {"truth", to_json(v.truth)},
          {"seed", v.seed},
          {"scenario", v.scenario_label},
          {"outlier_value", num(v.outlier_value)}};
}

SimTable simtable_from_json(const json& j) {
  SimTable t;
  for (const auto& r : j.at("rows")) {
    SimCell c;
    c.method = r.at("method").get<std::string>();
    c.parameter = r.at("parameter").get<std::string>();
    c.proportion = r.at("proportion").get<double>();
    c.bias = num(r.at("bias"));
    c.mse = num(r.at("mse"));
    c.bias_se = num(r.at("bias_se"));
    c.successes = r.at("successes").get<int>();
    c.failures = r.at("failures").get<int>();
    t.rows.push_back(c);
  }
  t.replications = j.at("replications").get<int>();
  t.n = j.at("n").get<int>();
  t.truth = params_from_json(j.at("truth"));
  t.seed = j.at("seed").get<std::uint64_t>();
  t.scenario_label = j.at("scenario").get<std::string>();
  t.outlier_value = num(j.at("outlier_value"));
  return t;
}

json to_json(const FitReport& v) {
  return {{"dataset", v.dataset},
          {"n", v.n},
          {"dropped", v.dropped},
          {"removed_outliers", v.removed_outliers},
          {"method", v.method_label},
          {"fit", to_json(v.fit)},
          {"ks_distance", num(v.ks_distance)},
          {"standard_errors", v.standard_errors ? vec2(*v.standard_errors) : json(nullptr)},
          {"cvm", v.cvm ? to_json(*v.cvm) : json(nullptr)}};
}

FitReport fit_report_from_json(const json& j) {
  FitReport r{};
  r.dataset = j.at("dataset").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.dropped = j.at("dropped").get<std::size_t>();
  r.removed_outliers = j.at("removed_outliers").get<std::size_t>();
  r.method_label = j.at("method").get<std::string>();
  r.fit = fit_from_json(j.at("fit"));
  r.ks_distance = num(j.at("ks_distance"));
  if (!j.at("standard_errors").is_null()) r.standard_errors = vec2(j.at("standard_errors"));
  if (!j.at("cvm").is_null()) r.cvm = cvm_from_json(j.at("cvm"));
  return r;
}

json to_json(const DiagnoseReport& v) {
  return {{"dataset", v.dataset},     {"n", v.n},
          {"dropped", v.dropped},     {"trend", to_json(v.trend)},
          {"acf_pacf", to_json(v.acf)}, {"outliers", to_json(v.outliers)},
          {"gof", to_json(v.gof)}};
}

DiagnoseReport diagnose_report_from_json(const json& j) {
  DiagnoseReport r;
  r.dataset = j.at("dataset").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.dropped = j.at("dropped").get<std::size_t>();
  r.trend = trend_from_json(j.at("trend"));
  r.acf = acf_from_json(j.at("acf_pacf"));
  r.outliers = outliers_from_json(j.at("outliers"));
  r.gof = gof_from_json(j.at("gof"));
  return r;
}

}  // namespace gemdpde::cli
