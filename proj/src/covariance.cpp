#include "empscen/covariance.hpp"

#include <cmath>

#include "empscen/errors.hpp"
#include "empscen/factorization.hpp"

namespace empscen {

Eigen::MatrixXd matrix_root(const MomentMatrix& M) {
  CholeskyFactors factors = pivoted_cholesky(M, 0.0);
  return factors.L;
}

ScenarioSet covariance_scenarios(const MomentMatrix& M) {
  const Eigen::Index m = M.values.rows();
  if (m < 2 || M.degree != 1)
    throw InvalidInputError("covariance_scenarios: expected a degree-1 moment matrix");
  if (std::abs(M.values(0, 0) - 1.0) > 1e-8)
    throw NormalizationError("covariance_scenarios: M(0,0) must be 1 for a probability measure");

  Eigen::MatrixXd R = matrix_root(M);
  const Eigen::Index r = R.cols();
  const double inv_sqrt_r = 1.0 / std::sqrt(static_cast<double>(r));

  // Reflect the first row of R onto (1/sqrt(r)) 1; then V = sqrt(r) H R^T has
  // an all-ones first column, i.e. rows tau_1(xi_j).
  Eigen::VectorXd rvec = R.row(0).transpose();
  Eigen::VectorXd v = rvec - Eigen::VectorXd::Constant(r, inv_sqrt_r);
  Eigen::MatrixXd V = std::sqrt(static_cast<double>(r)) * R.transpose();
  const double vnorm = v.norm();
  if (vnorm > 1e-14) {
    const double gamma = 2.0 / (vnorm * vnorm);
    V.noalias() -= (gamma * v) * (v.transpose() * V);
  }

  ScenarioSet set;
  set.points = V.rightCols(m - 1);
  set.weights = Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
  set.source = ScenarioSource::covariance;
  return set;
}

}  // namespace empscen
