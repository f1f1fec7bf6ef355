#include "empscen/ghtp.hpp"

#include <algorithm>
#include <numeric>

#include "empscen/errors.hpp"

namespace empscen {

namespace {

// k largest |g| entries, lowest index on ties, returned sorted by index
std::vector<Eigen::Index> top_k(const Eigen::VectorXd& g, Eigen::Index k) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&g](Eigen::Index a, Eigen::Index b) {
    return std::abs(g[a]) > std::abs(g[b]);
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

GhtpResult ghtp_select(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double tolerance,
                       Eigen::Index max_iter) {
  const Eigen::Index rows = A.rows();
  const Eigen::Index n = A.cols();
  if (y.size() != rows) throw InvalidInputError("ghtp_select: dimension mismatch");
  if (tolerance < 0.0) throw InvalidInputError("ghtp_select: tolerance must be >= 0");
  if (max_iter < 1) throw InvalidInputError("ghtp_select: max_iter must be >= 1");

  GhtpResult out;
  out.solution = Eigen::VectorXd::Zero(n);
  double err = y.norm();
  if (err <= tolerance) {
    out.converged = true;
    return out;
  }

  // For desk-scale problems both the gradient step and the restricted normal
  // equations run off the precomputed Gramian.
  const bool use_gram = n <= 4096;
  Eigen::MatrixXd gram;
  if (use_gram) gram = A.transpose() * A;
  const Eigen::VectorXd aty = A.transpose() * y;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Index> support;

  for (Eigen::Index k = 1; k <= std::min(max_iter, n); ++k) {
    Eigen::VectorXd gradient_step;
    if (use_gram)
      gradient_step = x - (gram * x - aty);
    else
      gradient_step = x - A.transpose() * (A * x - y);

    support = top_k(gradient_step, k);

    Eigen::VectorXd z;
    if (use_gram) {
      Eigen::MatrixXd gs(k, k);
      Eigen::VectorXd cs(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        cs[a] = aty[support[static_cast<std::size_t>(a)]];
        for (Eigen::Index b = 0; b < k; ++b)
          gs(a, b) = gram(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(gs);
      const Eigen::VectorXd dvec = ldlt.vectorD();
      const double dmax = dvec.maxCoeff();
      if (dvec.minCoeff() <= 1e-12 * std::max(dmax, 1e-300)) {
        out.rank_deficient = true;
        Eigen::MatrixXd As(rows, k);
        for (Eigen::Index a = 0; a < k; ++a) As.col(a) = A.col(support[static_cast<std::size_t>(a)]);
        z = As.completeOrthogonalDecomposition().solve(y);
      } else {
        z = ldlt.solve(cs);
      }
    } else {
      Eigen::MatrixXd As(rows, k);
      for (Eigen::Index a = 0; a < k; ++a) As.col(a) = A.col(support[static_cast<std::size_t>(a)]);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(As);
      if (cod.rank() < k) out.rank_deficient = true;
      z = cod.solve(y);
    }

    x.setZero();
    for (Eigen::Index a = 0; a < k; ++a) x[support[static_cast<std::size_t>(a)]] = z[a];

    err = (A * x - y).norm();
    out.residuals.push_back(err);
    if (err <= tolerance) {
      out.converged = true;
      break;
    }
  }

  for (Eigen::Index idx : support)
    if (x[idx] != 0.0) out.support.push_back(idx);
  out.solution = x;
  return out;
}

}  // namespace empscen
