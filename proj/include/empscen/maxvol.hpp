#pragma once

#include <Eigen/Dense>
#include <vector>

namespace empscen {

/// Greedy maximum-volume row selection on Q (N x r): repeatedly pick the row
/// of largest residual norm and orthogonalize the rest against it. The pivot
/// sequence coincides with a column-pivoted QR factorization of Q^T. Ties
/// break to the lowest index.
std::vector<Eigen::Index> maxvol_select(const Eigen::MatrixXd& Q, Eigen::Index k);

}  // namespace empscen
