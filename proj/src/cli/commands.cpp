#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gemdpde/cli.hpp"
#include "gemdpde/parallel.hpp"
#include "gemdpde/rng.hpp"

namespace gemdpde::cli {

namespace {

struct Common {
  std::uint64_t seed = 20240101;
  bool seed_given = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master RNG seed")->each([&c](const std::string&) {
    c.seed_given = true;
  });
  cmd->add_option("--threads", c.threads, "Worker threads (default: GEMDPDE_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

int threads_of(const Common& c) { return c.threads > 0 ? c.threads : default_thread_count(); }

std::string g17(double v) { return fmt::format("{:.17g}", v); }

MethodSpec method_from_options(const std::string& method, const std::string& alpha,
                               const std::string& grid) {
  MethodSpec spec = parse_method_spec(method);
  if (!alpha.empty()) {
    if (spec.method != Method::MDPDE) {
      throw std::invalid_argument("--alpha applies to MDPDE only");
    }
    if (alpha == "opt") {
      spec.tune_alpha = true;
    } else {
      spec = parse_method_spec("MDPDE(" + alpha + ")");
    }
  }
  if (spec.tune_alpha) spec.alpha_grid = grid.empty() ? default_alpha_grid() : parse_grid(grid);
  return spec;
}

// Wald standard errors sqrt(diag(Sigma)/n); defined for ML and MDPDE.
std::optional<Vec2> standard_errors(const FitResult& r, std::size_t n) {
  if (r.method != Method::ML && r.method != Method::MDPDE) return std::nullopt;
  try {
    const Mat2 s = sandwich_sigma(r.params, r.alpha.value_or(0.0)).Sigma;
    return Vec2{std::sqrt(s.a11 / static_cast<double>(n)), std::sqrt(s.a22 / static_cast<double>(n))};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << text;
}

int cmd_fit(const std::string& data, const std::string& method, const std::string& alpha,
            const std::string& grid, bool remove_outliers, const Common& c, std::ostream& out) {
  const Dataset ds = read_dataset(data);
  Sample sample = ds.sample;
  FitReport report;
  report.dataset = data;
  report.dropped = ds.dropped;
  if (remove_outliers) {
    const OutlierReport o = flag_outliers_adjusted_boxplot(sample);
    sample = remove_flagged(sample, o);
    report.removed_outliers = o.flagged_indices.size();
  }
  report.n = sample.size();
  const MethodSpec spec = method_from_options(method, alpha, grid);
  if (spec.tune_alpha) {
    report.cvm = select_alpha_cvm(sample, spec.alpha_grid, threads_of(c));
    report.fit = fit_mdpde(sample, report.cvm->optimal_alpha);
  } else {
    report.fit = fit(spec, sample, threads_of(c));
  }
  report.method_label = spec.label();
  report.ks_distance = ks_statistic(sample.values, report.fit.params);
  report.standard_errors = standard_errors(report.fit, sample.size());
  out << to_json(report).dump(2) << "\n";
  return report.fit.optim.converged ? kOk : kNumerical;
}

std::string cvm_csv(const CvmCurve& curve) {
  std::string s = "alpha,cvm_distance,failed,optimal\n";
  for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
    s += fmt::format("{},{},{},{}\n", g17(curve.alphas[i]),
                     curve.failed[i] ? std::string("NA") : g17(curve.distances[i]),
                     curve.failed[i] ? 1 : 0, i == curve.optimal_index ? 1 : 0);
  }
  return s;
}

int cmd_tune(const std::string& data, const std::string& grid, const std::string& out_path,
             const Common& c, std::ostream& out, std::ostream& err) {
  const Dataset ds = read_dataset(data);
  const std::vector<double> alphas = grid.empty() ? default_alpha_grid() : parse_grid(grid);
  const CvmCurve curve = select_alpha_cvm(ds.sample, alphas, threads_of(c));
  write_text(out_path, cvm_csv(curve), out);
  err << fmt::format("optimal alpha = {:.4f} (cvm distance {:.6g})\n", curve.optimal_alpha,
                     curve.distances[curve.optimal_index]);
  for (bool f : curve.failed)
    if (f) return kNumerical;
  return kOk;
}

int cmd_simulate(const std::string& config, const std::string& format,
                 const std::string& out_path, const Common& c, std::ostream& out) {
  SimConfig cfg = read_sim_config(config);
  if (c.seed_given) cfg.seed = c.seed;
  const SimTable table =
      run_contamination_grid(cfg.truth, cfg.n, cfg.reps, cfg.resolved_outlier(), cfg.scenario,
                             cfg.proportions, cfg.methods, cfg.seed, threads_of(c));
  std::string text;
  if (format == "csv") text = to_csv(table);
  else if (format == "text") text = to_text_table(table);
  else text = to_json(table).dump(2) + "\n";
  write_text(out_path, text, out);
  for (const auto& row : table.rows)
    if (row.failures > 0) return kNumerical;
  return kOk;
}

int cmd_curves(const std::string& kind, double lambda, double nu, double alpha,
               const std::string& grid, std::ostream& out) {
  const GEParams params(lambda, nu);
  auto default_grid = [&](const char* g) { return parse_grid(grid.empty() ? g : grid); };
  if (kind == "are") {
    out << "alpha,are_lambda,are_nu\n";
    for (double a : default_grid("0:1:0.05")) {
      const Vec2 r = are(params, a);
      out << fmt::format("{},{},{}\n", g17(a), g17(r[0]), g17(r[1]));
    }
  } else if (kind == "sigma") {
    out << "alpha,sigma11,sigma12,sigma22\n";
    for (double a : default_grid("0:1:0.05")) {
      const Mat2 s = sandwich_sigma(params, a).Sigma;
      out << fmt::format("{},{},{},{}\n", g17(a), g17(s.a11), g17(s.a12), g17(s.a22));
    }
  } else if (kind == "influence") {
    const InfluenceCurve ic = influence_curve(default_grid("0.05:50:0.05"), params, alpha);
    out << "x,if_lambda,if_nu\n";
    for (std::size_t i = 0; i < ic.xs.size(); ++i) {
      out << fmt::format("{},{},{}\n", g17(ic.xs[i]), g17(ic.if_lambda[i]), g17(ic.if_nu[i]));
    }
  } else if (kind == "density") {
    out << "x,pdf,cdf\n";
    for (double x : default_grid("0.05:10:0.05")) {
      out << fmt::format("{},{},{}\n", g17(x), g17(ge_pdf(x, params)), g17(ge_cdf(x, params)));
    }
  } else if (kind == "moments") {
    out << "nu,mean,variance,skewness\n";
    for (double v : default_grid("0.1:10:0.1")) {
      const MomentSummary m = ge_moments(GEParams(lambda, v));
      out << fmt::format("{},{},{},{}\n", g17(v), g17(m.mean), g17(m.variance), g17(m.skewness));
    }
  } else {
    throw std::invalid_argument("unknown curve kind '" + kind + "'");
  }
  return kOk;
}

int cmd_diagnose(const std::string& data, const std::string& gof_method, int bootstrap,
                 int max_lag, const Common& c, std::ostream& out) {
  const Dataset ds = read_dataset(data);
  DiagnoseReport report;
  report.dataset = data;
  report.n = ds.sample.size();
  report.dropped = ds.dropped;
  report.trend = trend_test(ds.sample, ds.times);
  const int lag_cap = static_cast<int>((ds.sample.size() - 1) / 2);
  report.acf = acf_pacf(ds.sample, std::max(1, std::min(max_lag, lag_cap)));
  report.outliers = flag_outliers_adjusted_boxplot(ds.sample);
  const Sample clean = remove_flagged(ds.sample, report.outliers);
  report.gof = ks_bootstrap_test(clean, parse_method_spec(gof_method), bootstrap, c.seed,
                                 threads_of(c));
  out << to_json(report).dump(2) << "\n";
  return kOk;
}

int cmd_sample(double lambda, double nu, int n, double proportion, double outlier,
               double start_time, const Common& c, std::ostream& out) {
  if (n < 1) throw std::invalid_argument("--n must be positive");
  const GEParams params(lambda, nu);
  Rng rng(c.seed);
  std::vector<double> values(static_cast<std::size_t>(n));
  ge_fill(values, params, rng);
  if (proportion > 0.0) {
    ContaminationSpec{proportion, outlier, ""}.validate();
    const std::size_t k = contaminated_count(values.size(), proportion);
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
      values[idx[i]] = outlier;
    }
  }
  std::vector<double> times(values.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = start_time + static_cast<double>(i);
  write_dataset(out, times, values);
  return kOk;
}

}  // namespace

std::string cvm_to_csv(const CvmCurve& curve) { return cvm_csv(curve); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust fitting of the generalized exponential distribution"};
  app.require_subcommand(1);
  Common common;

  std::string data;
  std::string method = "ML";
  std::string alpha;
  std::string grid;
  std::string out_path;
  bool remove_outliers = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a dataset and report estimates as JSON");
  fit_cmd->add_option("data", data, "CSV with time,value columns")->required();
  fit_cmd->add_option("-m,--method", method, "ML, MM, PT, LS, WLS, LM, MDPDE or MDPDE(a)");
  fit_cmd->add_option("-a,--alpha", alpha, "MDPDE tuning parameter, or 'opt'");
  fit_cmd->add_option("--grid", grid, "Alpha grid for --alpha opt (start:stop:step or list)");
  fit_cmd->add_flag("--remove-outliers", remove_outliers, "Drop adjusted-boxplot outliers first");
  add_common(fit_cmd, common);

  auto* tune_cmd = app.add_subcommand("tune-alpha", "Leave-one-out CVM curve over an alpha grid");
  tune_cmd->add_option("data", data)->required();
  tune_cmd->add_option("--grid", grid, "Alpha grid (default 0:1:0.02)");
  tune_cmd->add_option("-o,--out", out_path, "Write the CSV here instead of stdout");
  add_common(tune_cmd, common);

  std::string config;
  std::string format = "csv";
  auto* sim_cmd = app.add_subcommand("simulate", "Contamination study from a config file");
  sim_cmd->add_option("config", config)->required();
  sim_cmd->add_option("-f,--format", format)->check(CLI::IsMember({"csv", "text", "json"}));
  sim_cmd->add_option("-o,--out", out_path);
  add_common(sim_cmd, common);

  std::string kind;
  double lambda = 1.0;
  double nu = 1.5;
  double alpha_value = 0.5;
  auto* curves_cmd = app.add_subcommand("curves", "Plot-ready series as CSV");
  curves_cmd->add_option("kind", kind)
      ->required()
      ->check(CLI::IsMember({"are", "influence", "sigma", "density", "moments"}));
  curves_cmd->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
  curves_cmd->add_option("--nu", nu)->check(CLI::PositiveNumber);
  curves_cmd->add_option("--alpha", alpha_value, "Tuning parameter for 'influence'")
      ->check(CLI::NonNegativeNumber);
  curves_cmd->add_option("--grid", grid, "Alpha, x or nu grid depending on kind");
  add_common(curves_cmd, common);

  std::string gof_method = "ML";
  int bootstrap = 1000;
  int max_lag = 15;
  auto* diag_cmd = app.add_subcommand("diagnose", "Trend, ACF/PACF, outliers and K-S bootstrap");
  diag_cmd->add_option("data", data)->required();
  diag_cmd->add_option("--gof-method", gof_method, "Estimator refit in the bootstrap");
  diag_cmd->add_option("-B,--bootstrap", bootstrap, "Bootstrap replicates")
      ->check(CLI::Range(99, 1000000));
  diag_cmd->add_option("--max-lag", max_lag)->check(CLI::PositiveNumber);
  add_common(diag_cmd, common);

  int n = 100;
  double proportion = 0.0;
  double outlier = 0.0;
  double start_time = 1.0;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a GE dataset, optionally contaminated");
  sample_cmd->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
  sample_cmd->add_option("--nu", nu)->check(CLI::PositiveNumber);
  sample_cmd->add_option("-n", n);
  sample_cmd->add_option("--contaminate", proportion, "Proportion replaced by --outlier");
  sample_cmd->add_option("--outlier", outlier);
  sample_cmd->add_option("--start-time", start_time);
  add_common(sample_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(data, method, alpha, grid, remove_outliers, common, out);
    if (*tune_cmd) return cmd_tune(data, grid, out_path, common, out, err);
    if (*sim_cmd) return cmd_simulate(config, format, out_path, common, out);
    if (*curves_cmd) return cmd_curves(kind, lambda, nu, alpha_value, grid, out);
    if (*diag_cmd) return cmd_diagnose(data, gof_method, bootstrap, max_lag, common, out);
    if (*sample_cmd) {
      return cmd_sample(lambda, nu, n, proportion, outlier, start_time, common, out);
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace gemdpde::cli
