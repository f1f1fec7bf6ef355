#include "empscen/weights.hpp"

#include <algorithm>
#include <vector>

#include "empscen/errors.hpp"

namespace empscen {

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index r = v.size();
  if (r < 1) throw InvalidInputError("project_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + r);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < r; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

AdmmResult admm_weights(const Eigen::MatrixXd& V_sel, const Eigen::VectorXd& y_hat,
                        const AdmmConfig& config) {
  const Eigen::Index r = V_sel.rows();
  if (r < 1) throw InvalidInputError("admm_weights: no scenarios");
  if (V_sel.cols() != y_hat.size())
    throw InvalidInputError("admm_weights: moment sequence does not match Vandermonde basis");
  if (config.rho <= 0.0 || config.primal_tol <= 0.0 || config.dual_tol <= 0.0)
    throw InvalidInputError("admm_weights: rho and tolerances must be positive");

  AdmmResult out;
  if (r == 1) {  // the simplex is a single point
    out.weights = Eigen::VectorXd::Ones(1);
    out.converged = true;
    out.rho_final = config.rho;
    return out;
  }

  // The x-update solves min ||A x - y||^2 + rho ||x - v||^2 with A = V_sel^T.
  // Moment columns span many orders of magnitude, so the normal equations
  // would square an already harsh condition number; instead reduce A once by
  // a thin QR and refactor only the small stacked system [R; sqrt(rho) I]
  // when rho changes.
  const Eigen::MatrixXd A = V_sel.transpose();
  const Eigen::Index k = std::min<Eigen::Index>(A.rows(), r);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_A(A);
  const Eigen::MatrixXd R1 =
      qr_A.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Eigen::VectorXd c = (qr_A.householderQ().adjoint() * y_hat).head(k);

  double rho = config.rho;
  Eigen::MatrixXd stacked(k + r, r);
  Eigen::VectorXd stacked_rhs(k + r);
  stacked_rhs.head(k) = c;
  auto refactor = [&](double penalty) {
    stacked.topRows(k) = R1;
    stacked.bottomRows(r) =
        std::sqrt(penalty) * Eigen::MatrixXd::Identity(r, r);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(stacked);
  };
  Eigen::HouseholderQR<Eigen::MatrixXd> solver = refactor(rho);

  Eigen::VectorXd z = Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd x = z;

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    stacked_rhs.tail(r) = std::sqrt(rho) * (z - u);
    x = solver.solve(stacked_rhs);
    Eigen::VectorXd z_prev = z;
    z = project_simplex(x + u);
    u += x - z;

    out.primal_residual = (x - z).norm();
    out.dual_residual = rho * (z - z_prev).norm();
    out.iterations = iter;
    // iterates live on the simplex (norm <= 1) so the primal test is
    // effectively absolute; the dual test scales with the dual variable,
    // which grows with the moment magnitudes
    const double primal_gate = config.primal_tol * std::max(1.0, std::max(x.norm(), z.norm()));
    const double dual_gate = config.dual_tol * std::max(1.0, rho * u.norm());
    if (out.primal_residual <= primal_gate && out.dual_residual <= dual_gate) {
      out.converged = true;
      break;
    }

    if (config.adaptive_rho) {
      double next_rho = rho;
      if (out.primal_residual > 10.0 * out.dual_residual)
        next_rho = rho * 2.0;
      else if (out.dual_residual > 10.0 * out.primal_residual)
        next_rho = rho * 0.5;
      if (next_rho != rho && next_rho > 1e-12 && next_rho < 1e14) {
        u *= rho / next_rho;  // rescale the scaled dual variable
        rho = next_rho;
        solver = refactor(rho);
      }
    }
  }

  out.weights = z;
  out.rho_final = rho;
  return out;
}

AdmmResult admm_weights(const VandermondeMatrix& V_sel, const MomentSequence& y_hat,
                        const AdmmConfig& config) {
  return admm_weights(V_sel.values, y_hat.values, config);
}

double moment_fit_residual(const Eigen::MatrixXd& V_sel, const Eigen::VectorXd& y_hat,
                           const Eigen::VectorXd& w) {
  return (V_sel.transpose() * w - y_hat).norm();
}

}  // namespace empscen
