#pragma once

#include <Eigen/Dense>
#include <vector>

namespace empscen {

struct GhtpResult {
  std::vector<Eigen::Index> support;  // indices of the nonzero components
  Eigen::VectorXd solution;           // length n, zero off the support
  std::vector<double> residuals;      // ||A x^k - y||_2 per iteration
  bool converged = false;
  bool rank_deficient = false;  // some restricted system was solved in the LS sense
};

/// Graded hard thresholding pursuit on min ||A x - y||_2: iteration k keeps
/// the k largest entries of the gradient step and refits on that support, so
/// the support size grows with the iteration count.
GhtpResult ghtp_select(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double tolerance,
                       Eigen::Index max_iter);

}  // namespace empscen
