#pragma once

#include <string>
#include <vector>

#include "gemdpde/estimators.hpp"

namespace gemdpde {

/// An estimator choice: a method, plus alpha for MDPDE. With tune_alpha set,
/// MDPDE picks alpha from `alpha_grid` by leave-one-out CVM on each sample.
struct MethodSpec {
  Method method = Method::ML;
  double alpha = 0.0;
  bool tune_alpha = false;
  std::vector<double> alpha_grid;

  /// "ML", "MDPDE(0.5)", "MDPDE(opt)", ...
  std::string label() const;

  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// Parses labels of the form produced by MethodSpec::label().
MethodSpec parse_method_spec(const std::string& text);

FitResult fit(const MethodSpec& spec, const Sample& sample, int threads = 1);

}  // namespace gemdpde
