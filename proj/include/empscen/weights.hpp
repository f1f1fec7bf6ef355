#pragma once

#include <Eigen/Dense>

#include "empscen/moments.hpp"

namespace empscen {

/// Euclidean projection onto {w >= 0, 1^T w = 1} by sort and threshold;
/// exact in O(r log r).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

struct AdmmConfig {
  double rho = 1.0;
  int max_iter = 5000;
  double primal_tol = 1e-10;
  double dual_tol = 1e-10;
  /// Residual balancing; the x-update factorization is re-cached whenever
  /// rho changes. Needed for moment systems whose entries span many orders
  /// of magnitude.
  bool adaptive_rho = true;
};

struct AdmmResult {
  Eigen::VectorXd weights;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  double rho_final = 0.0;
};

/// min ||V_sel^T w - y_hat||_2 over the probability simplex, split as
/// regularized least-squares x-update, simplex-projection z-update and dual
/// ascent. Returns the projected iterate, which is feasible by construction;
/// a run that exhausts max_iter comes back flagged non-converged.
AdmmResult admm_weights(const Eigen::MatrixXd& V_sel, const Eigen::VectorXd& y_hat,
                        const AdmmConfig& config = {});
AdmmResult admm_weights(const VandermondeMatrix& V_sel, const MomentSequence& y_hat,
                        const AdmmConfig& config = {});

/// || V_sel^T w - y_hat ||_2, the objective the simplex solve minimizes.
double moment_fit_residual(const Eigen::MatrixXd& V_sel, const Eigen::VectorXd& y_hat,
                           const Eigen::VectorXd& w);

}  // namespace empscen
