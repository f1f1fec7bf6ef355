#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"

namespace empscen {

enum class ScenarioSource { covariance, omp, maxvol, ghtp, lasserre };

std::string to_string(ScenarioSource source);
ScenarioSource scenario_source_from_string(const std::string& name);

/// r support points with probability weights; the toolkit's main output.
struct ScenarioSet {
  Eigen::MatrixXd points;   // r x d
  Eigen::VectorXd weights;  // r, nonnegative, sums to 1
  ScenarioSource source = ScenarioSource::omp;
  /// Original sample positions for subset selectors; empty for sources that
  /// synthesize points (covariance, lasserre).
  std::vector<Eigen::Index> selected_indices;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

/// Per-iteration diagnostics of the matching-pursuit selection.
struct OmpTrace {
  std::vector<double> residual_norms;  // relative residual after each pivot
  std::vector<Eigen::Index> pivot_sequence;
  bool converged = false;
};

/// One scenario per row: weight, then the d coordinates.
void save_scenarios_csv(const ScenarioSet& set, const std::string& path);

nlohmann::json scenario_set_json(const ScenarioSet& set, const OmpTrace* trace = nullptr);

}  // namespace empscen
