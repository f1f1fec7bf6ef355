#pragma once

#include <Eigen/Dense>

#include "empscen/moments.hpp"
#include "empscen/scenario_set.hpp"

namespace empscen {

/// Matrix root M = R R^T with r = rank(M) columns, computed by pivoted
/// Cholesky so that rank deficiency is handled natively.
Eigen::MatrixXd matrix_root(const MomentMatrix& M);

/// Closed-form scenarios with uniform weights 1/r from a degree-1 moment
/// matrix: one Householder reflection maps the first row of the root onto
/// the constant monomial, which turns R^T into genuine Vandermonde rows.
ScenarioSet covariance_scenarios(const MomentMatrix& M);

}  // namespace empscen
