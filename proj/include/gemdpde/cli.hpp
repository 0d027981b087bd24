#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gemdpde/asymptotics.hpp"
#include "gemdpde/diagnostics.hpp"
#include "gemdpde/fit.hpp"
#include "gemdpde/mdpde.hpp"
#include "gemdpde/simharness.hpp"

namespace gemdpde::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// Bad input file contents; `line` is 1-based, 0 when not tied to a line.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Dataset {
  Sample sample;
  std::vector<double> times;
  std::size_t dropped = 0;  // rows with a missing value
};

/// CSV with a `time,value` header. Empty or NA values are dropped and
/// counted; at least 3 usable rows must remain.
Dataset parse_dataset(std::istream& in, const std::string& name = "<stream>");
Dataset read_dataset(const std::string& path);
void write_dataset(std::ostream& out, const std::vector<double>& times,
                   const std::vector<double>& values);

/// "0:1:0.02" (inclusive range) or "0.1,0.2,0.5".
std::vector<double> parse_grid(const std::string& text);

struct SimConfig {
  GEParams truth{1.0, 1.5};
  int n = 100;
  int reps = 1000;
  std::vector<double> proportions{0.0, 0.01, 0.05, 0.10};
  std::optional<double> outlier_value;
  double return_level_prob = 0.999;
  std::string scenario = "C1";
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 1;

  /// outlier_value if set, else the return_level_prob quantile of truth.
  double resolved_outlier() const;
};

/// `key = value` lines; `#` starts a comment. Throws DataError on unknown
/// keys or malformed values.
SimConfig parse_sim_config(std::istream& in, const std::string& name = "<stream>");
SimConfig read_sim_config(const std::string& path);

/// Output of the fit command.
struct FitReport {
  std::string dataset;
  std::size_t n = 0;
  std::size_t dropped = 0;
  std::size_t removed_outliers = 0;
  FitResult fit{Method::ML, GEParams(1.0, 1.0), std::nullopt, 0.0, {}};
  std::string method_label;
  double ks_distance = 0.0;
  std::optional<Vec2> standard_errors;  // sandwich / n, for ML and MDPDE
  std::optional<CvmCurve> cvm;

  friend bool operator==(const FitReport&, const FitReport&) = default;
};

/// Output of the diagnose command.
struct DiagnoseReport {
  std::string dataset;
  std::size_t n = 0;
  std::size_t dropped = 0;
  TrendResult trend;
  AcfPacf acf;
  OutlierReport outliers;
  GofReport gof;

  friend bool operator==(const DiagnoseReport&, const DiagnoseReport&) = default;
};

// Non-finite doubles serialize as null and parse back as NaN.
nlohmann::json to_json(const GEParams& v);
nlohmann::json to_json(const OptimResult& v);
nlohmann::json to_json(const FitResult& v);
nlohmann::json to_json(const CvmCurve& v);
nlohmann::json to_json(const TrendResult& v);
nlohmann::json to_json(const AcfPacf& v);
nlohmann::json to_json(const OutlierReport& v);
nlohmann::json to_json(const GofReport& v);
nlohmann::json to_json(const SimTable& v);
nlohmann::json to_json(const FitReport& v);
nlohmann::json to_json(const DiagnoseReport& v);

GEParams params_from_json(const nlohmann::json& j);
OptimResult optim_from_json(const nlohmann::json& j);
FitResult fit_from_json(const nlohmann::json& j);
CvmCurve cvm_from_json(const nlohmann::json& j);
TrendResult trend_from_json(const nlohmann::json& j);
AcfPacf acf_from_json(const nlohmann::json& j);
OutlierReport outliers_from_json(const nlohmann::json& j);
GofReport gof_from_json(const nlohmann::json& j);
SimTable simtable_from_json(const nlohmann::json& j);
FitReport fit_report_from_json(const nlohmann::json& j);
DiagnoseReport diagnose_report_from_json(const nlohmann::json& j);

/// CSV with one row per alpha: alpha,cvm_distance,failed,optimal.
std::string cvm_to_csv(const CvmCurve& curve);

/// Entry point shared by the executable and the tests. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gemdpde::cli
