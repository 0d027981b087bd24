#include "gemdpde/fit.hpp"

#include <fmt/format.h>

#include "gemdpde/mdpde.hpp"

namespace gemdpde {

std::string MethodSpec::label() const {
  if (method != Method::MDPDE) return std::string(method_name(method));
  if (tune_alpha) return "MDPDE(opt)";
  return fmt::format("MDPDE({:g})", alpha);
}

MethodSpec parse_method_spec(const std::string& text) {
  MethodSpec spec;
  const auto open = text.find('(');
  if (open == std::string::npos) {
    spec.method = parse_method(text);
    return spec;
  }
  const auto close = text.find(')', open);
  if (close == std::string::npos || close + 1 != text.size()) {
    throw std::invalid_argument("malformed method '" + text + "'");
  }
  spec.method = parse_method(text.substr(0, open));
  if (spec.method != Method::MDPDE) {
    throw std::invalid_argument("only MDPDE takes a tuning parameter: '" + text + "'");
  }
  const std::string arg = text.substr(open + 1, close - open - 1);
  if (arg == "opt") {
    spec.tune_alpha = true;
    return spec;
  }
  std::size_t used = 0;
  try {
    spec.alpha = std::stod(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != arg.size() || !(spec.alpha >= 0.0)) {
    throw std::invalid_argument("bad MDPDE tuning parameter in '" + text + "'");
  }
  return spec;
}

FitResult fit(const MethodSpec& spec, const Sample& sample, int threads) {
  switch (spec.method) {
    case Method::ML: return fit_ml(sample);
    case Method::MM: return fit_mm(sample);
    case Method::PT: return fit_pt(sample);
    case Method::LS: return fit_ls(sample);
    case Method::WLS: return fit_wls(sample);
    case Method::LM: return fit_lm(sample);
    case Method::MDPDE: {
      if (!spec.tune_alpha) return fit_mdpde(sample, spec.alpha);
      const auto grid = spec.alpha_grid.empty() ? default_alpha_grid() : spec.alpha_grid;
      const CvmCurve curve = select_alpha_cvm(sample, grid, threads);
      return fit_mdpde(sample, curve.optimal_alpha);
    }
  }
  throw std::logic_error("fit: unhandled method");
}

}  // namespace gemdpde
