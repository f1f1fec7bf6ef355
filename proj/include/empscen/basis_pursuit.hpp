#pragma once

#include <Eigen/Dense>

namespace empscen {

struct BasisPursuitResult {
  Eigen::VectorXd weights;
  int iterations = 0;
  bool converged = false;
};

/// Proximal gradient (soft thresholding) on
///   (1/2) ||Q^T w - y_tilde||_2^2 + lambda ||w||_1.
/// With orthonormal Q columns the smooth part has unit Lipschitz constant,
/// so the step size is 1.
BasisPursuitResult basis_pursuit_solve(const Eigen::MatrixXd& Q, const Eigen::VectorXd& y_tilde,
                                       double lambda, double tol = 1e-12,
                                       int max_iter = 100000);

}  // namespace empscen
