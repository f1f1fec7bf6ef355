#pragma once

#include <Eigen/Dense>
#include <string>

namespace empscen {

/// N x d matrix of observations; the support of the empirical measure.
struct SamplePanel {
  Eigen::MatrixXd data;

  Eigen::Index n() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }
};

/// Validates N >= 1, d >= 1 and that every entry is finite.
SamplePanel make_panel(Eigen::MatrixXd data);

/// Per-coordinate affine normalization x -> (x - center) / scale. An affine
/// map is a triangular change of the polynomial basis, so moment matching at
/// any degree transfers exactly between the two coordinate systems.
struct Standardization {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& points) const;
};

/// Centers by the mean and scales by the standard deviation (degenerate
/// columns fall back to a unit scale).
Standardization fit_standardization(const SamplePanel& panel);

/// Headerless CSV, one observation per row, d comma-separated floats.
SamplePanel load_panel_csv(const std::string& path);
void save_panel_csv(const SamplePanel& panel, const std::string& path);

}  // namespace empscen
