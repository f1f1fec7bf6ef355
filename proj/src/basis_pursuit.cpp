#include "empscen/basis_pursuit.hpp"

#include <cmath>

#include "empscen/errors.hpp"

namespace empscen {

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

}  // namespace

BasisPursuitResult basis_pursuit_solve(const Eigen::MatrixXd& Q, const Eigen::VectorXd& y_tilde,
                                       double lambda, double tol, int max_iter) {
  if (lambda <= 0.0) throw InvalidInputError("basis_pursuit_solve: lambda must be positive");
  if (Q.cols() != y_tilde.size())
    throw InvalidInputError("basis_pursuit_solve: dimension mismatch");

  const Eigen::Index n = Q.rows();
  BasisPursuitResult out;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);

  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::VectorXd gradient = Q * (Q.transpose() * w - y_tilde);
    Eigen::VectorXd next(n);
    for (Eigen::Index i = 0; i < n; ++i) next[i] = soft_threshold(w[i] - gradient[i], lambda);
    const double delta = (next - w).lpNorm<Eigen::Infinity>();
    w = std::move(next);
    out.iterations = iter;
    if (delta <= tol) {
      out.converged = true;
      break;
    }
  }
  out.weights = std::move(w);
  return out;
}

}  // namespace empscen
