#include "empscen/moments.hpp"

#include <string>
#include <vector>

#include "empscen/errors.hpp"

namespace empscen {

namespace {

constexpr Eigen::Index kPairwiseThreshold = 100000;

// Accumulates chunk results f(chunk) with a pairwise reduction over row
// blocks, keeping rounding error logarithmic in the number of chunks.
template <typename Result, typename ChunkFn>
Result pairwise_rows(const Eigen::MatrixXd& rows, Eigen::Index chunk_size, ChunkFn&& fn) {
  std::vector<Result> partials;
  for (Eigen::Index begin = 0; begin < rows.rows(); begin += chunk_size) {
    Eigen::Index len = std::min(chunk_size, rows.rows() - begin);
    partials.push_back(fn(rows.middleRows(begin, len)));
  }
  while (partials.size() > 1) {
    std::size_t half = (partials.size() + 1) / 2;
    for (std::size_t i = 0; i + half < partials.size(); ++i) partials[i] += partials[i + half];
    partials.resize(half);
  }
  return partials.front();
}

}  // namespace

namespace detail {

Eigen::MatrixXd gram_normalized(const Eigen::MatrixXd& V) {
  const double inv_n = 1.0 / static_cast<double>(V.rows());
  Eigen::MatrixXd M;
  if (V.rows() >= kPairwiseThreshold) {
    M = pairwise_rows<Eigen::MatrixXd>(V, 16384, [](const auto& block) -> Eigen::MatrixXd {
      return block.transpose() * block;
    });
  } else {
    M = V.transpose() * V;
  }
  M *= inv_n;
  M = ((M + M.transpose()) * 0.5).eval();  // enforce exact symmetry
  return M;
}

Eigen::VectorXd column_means(const Eigen::MatrixXd& V) {
  const double inv_n = 1.0 / static_cast<double>(V.rows());
  Eigen::VectorXd y;
  if (V.rows() >= kPairwiseThreshold) {
    y = pairwise_rows<Eigen::VectorXd>(V, 16384, [](const auto& block) -> Eigen::VectorXd {
      return block.colwise().sum().transpose();
    });
  } else {
    y = V.colwise().sum().transpose();
  }
  return y * inv_n;
}

}  // namespace detail

VandermondeMatrix vandermonde(const Eigen::MatrixXd& points, int degree) {
  if (degree < 0) throw InvalidInputError("vandermonde: degree must be >= 0");
  if (points.rows() < 1 || points.cols() < 1)
    throw InvalidInputError("vandermonde: empty point set");
  if (!points.allFinite()) throw InvalidInputError("vandermonde: non-finite sample entry");

  const int d = static_cast<int>(points.cols());
  MonomialBasis basis(d, degree);
  const Eigen::Index n = points.rows();
  const Eigen::Index m = static_cast<Eigen::Index>(basis.size());

  Eigen::MatrixXd values(n, m);
  values.col(0).setOnes();
  // Each monomial of positive degree is a parent monomial times one variable:
  // column(a) = column(a - e_i) .* x_i for the first active variable i.
  for (Eigen::Index j = 1; j < m; ++j) {
    const MultiIndex& alpha = basis[static_cast<std::size_t>(j)];
    int var = 0;
    while (alpha.exponents[static_cast<std::size_t>(var)] == 0) ++var;
    MultiIndex parent = alpha;
    parent.exponents[static_cast<std::size_t>(var)] -= 1;
    std::ptrdiff_t parent_pos = basis.index_of(parent);
    values.col(j) = values.col(parent_pos).cwiseProduct(points.col(var));
  }
  return VandermondeMatrix{std::move(values), degree, std::move(basis)};
}

MomentSequence empirical_moments(const SamplePanel& panel, int two_q) {
  if (panel.n() < 1) throw InvalidInputError("empirical_moments: empty panel");
  VandermondeMatrix V = vandermonde(panel, two_q);
  return MomentSequence{detail::column_means(V.values), two_q, std::move(V.basis)};
}

MomentMatrix moment_matrix(const SamplePanel& panel, int degree) {
  VandermondeMatrix V = vandermonde(panel, degree);
  return MomentMatrix{detail::gram_normalized(V.values), degree, std::move(V.basis)};
}

double relative_error(const MomentMatrix& M, const VandermondeMatrix& V,
                      const Eigen::VectorXd& weights) {
  if (V.values.rows() != weights.size())
    throw InvalidInputError("relative_error: weights length must match Vandermonde rows");
  if (V.values.cols() != M.values.rows())
    throw InvalidInputError("relative_error: basis mismatch between M and V");
  const double denom = M.values.norm();
  if (denom == 0.0) throw DegenerateError("relative_error: ||M||_F vanishes");
  Eigen::MatrixXd recon = V.values.transpose() * weights.asDiagonal() * V.values;
  return (M.values - recon).norm() / denom;
}

void validate(const MomentMatrix& M) {
  const Eigen::MatrixXd& A = M.values;
  if (A.rows() != A.cols()) throw InvalidInputError("moment matrix is not square");
  const double scale = A.norm();
  if ((A - A.transpose()).norm() > 1e-12 * std::max(scale, 1.0))
    throw InvalidInputError("moment matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(lambda_max, 1.0))
    throw NotPsdError("moment matrix has an eigenvalue below the PSD floor");

  // Hankel structure: entries indexed by the same a+b agree.
  const double entry_scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  MonomialBasis sums(M.basis.dim(), 2 * M.degree);
  std::vector<double> seen(sums.size());
  std::vector<bool> filled(sums.size(), false);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      MultiIndex s = M.basis[static_cast<std::size_t>(i)];
      const MultiIndex& b = M.basis[static_cast<std::size_t>(j)];
      for (int k = 0; k < s.dim(); ++k) s.exponents[static_cast<std::size_t>(k)] += b.exponents[static_cast<std::size_t>(k)];
      auto pos = static_cast<std::size_t>(sums.index_of(s));
      if (!filled[pos]) {
        filled[pos] = true;
        seen[pos] = A(i, j);
      } else if (std::abs(seen[pos] - A(i, j)) > 1e-12 * entry_scale) {
        throw InvalidInputError("moment matrix violates the Hankel entry structure at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace empscen
