#include "empscen/maxvol.hpp"

#include "empscen/errors.hpp"

namespace empscen {

std::vector<Eigen::Index> maxvol_select(const Eigen::MatrixXd& Q, Eigen::Index k) {
  const Eigen::Index n = Q.rows();
  const Eigen::Index r = Q.cols();
  if (k < 1) throw InvalidInputError("maxvol_select: k must be >= 1");
  if (k > r) throw InvalidInputError("maxvol_select: k exceeds the column count of Q");
  if (k > n) throw InvalidInputError("maxvol_select: k exceeds the number of candidates");

  Eigen::MatrixXd residual = Q;  // rows of Q = columns of W := Q^T
  Eigen::VectorXd norms = residual.rowwise().squaredNorm();
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> selected;
  selected.reserve(static_cast<std::size_t>(k));

  for (Eigen::Index step = 0; step < k; ++step) {
    Eigen::Index pick = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (norms[i] > best) {
        best = norms[i];
        pick = i;
      }
    }
    taken[static_cast<std::size_t>(pick)] = true;
    selected.push_back(pick);

    if (best > 0.0) {
      Eigen::RowVectorXd u = residual.row(pick) / std::sqrt(best);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        residual.row(i) -= residual.row(i).dot(u) * u;
        norms[i] = residual.row(i).squaredNorm();  // recompute: keeps pivots exact
      }
    }
  }
  return selected;
}

}  // namespace empscen
