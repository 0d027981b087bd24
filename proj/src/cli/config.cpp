#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "gemdpde/cli.hpp"

namespace gemdpde::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double number(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw DataError("not a number: '" + v + "'", line);
  return x;
}

long integer(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw DataError("not an integer: '" + v + "'", line);
  return x;
}

std::vector<std::string> list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

double SimConfig::resolved_outlier() const {
  return outlier_value ? *outlier_value : make_outlier_value(truth, return_level_prob);
}

SimConfig parse_sim_config(std::istream& in, const std::string& name) {
  SimConfig cfg;
  double lambda = cfg.truth.lambda();
  double nu = cfg.truth.nu();
  std::vector<std::string> method_names;
  std::vector<double> alphas;
  bool have_alphas = false;
  std::string line;
  std::size_t lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw DataError("expected key = value", lineno);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (value.empty()) throw DataError("empty value for '" + key + "'", lineno);
      if (key == "truth.lambda") {
        lambda = number(value, lineno);
      } else if (key == "truth.nu") {
        nu = number(value, lineno);
      } else if (key == "n") {
        cfg.n = static_cast<int>(integer(value, lineno));
      } else if (key == "reps") {
        cfg.reps = static_cast<int>(integer(value, lineno));
      } else if (key == "seed") {
        const long s = integer(value, lineno);
        if (s < 0) throw DataError("seed must be nonnegative", lineno);
        cfg.seed = static_cast<std::uint64_t>(s);
      } else if (key == "contamination.proportions") {
        cfg.proportions.clear();
        for (const auto& p : list(value)) cfg.proportions.push_back(number(p, lineno));
      } else if (key == "contamination.value") {
        cfg.outlier_value = number(value, lineno);
      } else if (key == "contamination.return_level") {
        cfg.return_level_prob = number(value, lineno);
      } else if (key == "contamination.label") {
        cfg.scenario = value;
      } else if (key == "methods") {
        method_names = list(value);
      } else if (key == "alphas") {
        have_alphas = true;
        alphas.clear();
        for (const auto& a : list(value)) alphas.push_back(number(a, lineno));
      } else {
        throw DataError("unknown key '" + key + "'", lineno);
      }
    }
    cfg.truth = GEParams(lambda, nu);
    if (cfg.n < 5) throw DataError("n must be at least 5");
    if (cfg.reps < 1) throw DataError("reps must be at least 1");
    if (cfg.proportions.empty()) throw DataError("contamination.proportions is empty");
    for (double p : cfg.proportions) {
      if (!(p >= 0.0 && p < 1.0)) throw DataError("contamination proportions must lie in [0, 1)");
    }
    if (!(cfg.return_level_prob > 0.0 && cfg.return_level_prob < 1.0)) {
      throw DataError("contamination.return_level must lie in (0, 1)");
    }
    if (method_names.empty()) method_names = {"ML", "MDPDE"};
    if (!have_alphas) alphas = {0.1, 0.2, 0.5, 1.0};
    for (const auto& m : method_names) {
      MethodSpec spec = parse_method_spec(m);
      // bare "MDPDE" expands over the alphas list
      if (spec.method == Method::MDPDE && m.find('(') == std::string::npos) {
        for (double a : alphas) {
          MethodSpec s = spec;
          s.alpha = a;
          cfg.methods.push_back(s);
        }
      } else {
        cfg.methods.push_back(spec);
      }
    }
    if (cfg.methods.empty()) throw DataError("no methods configured");
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(fmt::format("{}: line {}: {}", name, lineno, e.what()));
  }
  return cfg;
}

SimConfig read_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  return parse_sim_config(in, path);
}

}  // namespace gemdpde::cli
