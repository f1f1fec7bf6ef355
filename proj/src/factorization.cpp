#include "empscen/factorization.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "empscen/errors.hpp"

namespace empscen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::Index argmax_eligible(const Eigen::VectorXd& d, const std::vector<bool>& taken,
                             Eigen::Index block_end) {
  Eigen::Index best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < block_end; ++i) {
    if (taken[static_cast<std::size_t>(i)]) continue;
    if (d[i] > best_value) {  // strict: ties resolve to the lowest index
      best_value = d[i];
      best = i;
    }
  }
  return best;
}

}  // namespace

CholeskyFactors pivoted_cholesky_impl(
    Eigen::VectorXd diag, const std::function<void(Eigen::Index, Eigen::VectorXd&)>& column,
    const PivotedCholeskyOptions& opts, bool flat_block_semantics) {
  const Eigen::Index m = diag.size();
  if (m < 1) throw InvalidInputError("pivoted_cholesky: empty matrix");
  if (opts.tolerance < 0.0) throw InvalidInputError("pivoted_cholesky: tolerance must be >= 0");
  const Eigen::Index block_end = opts.pivot_block > 0 ? opts.pivot_block : m;
  if (block_end > m) throw InvalidInputError("pivoted_cholesky: pivot block exceeds size");

  const double scale = std::max(diag.maxCoeff(), 0.0);
  const double neg_floor = -1e-10 * std::max(scale, 1.0);
  if (diag.minCoeff() < neg_floor)
    throw NotPsdError("pivoted_cholesky: negative diagonal entry beyond the PSD floor");
  // rank-exhaustion floor in the spirit of LAPACK pstrf
  const double pivot_floor = static_cast<double>(m) * kEps * std::max(scale, kEps);

  CholeskyFactors out;
  const Eigen::Index cap = opts.max_rank > 0 ? std::min(opts.max_rank, m) : m;
  Eigen::VectorXd d = diag.cwiseMax(0.0);
  double err = d.sum();
  out.residual_history.push_back(err);
  std::vector<bool> taken(static_cast<std::size_t>(m), false);

  Eigen::MatrixXd L;
  Eigen::MatrixXd B;
  Eigen::Index alloc = std::min<Eigen::Index>(cap, 32);
  L.resize(m, alloc);
  B.resize(m, alloc);
  Eigen::VectorXd col(m);
  Eigen::Index r = 0;

  while (err > opts.tolerance) {
    if (r == cap) {
      out.rank_capped = (cap == opts.max_rank && cap < m);
      break;
    }
    Eigen::Index j = argmax_eligible(d, taken, block_end);
    double dj = j >= 0 ? d[j] : 0.0;
    if (j < 0 || dj <= pivot_floor) {
      if (flat_block_semantics)
        throw FlatnessViolationError(
            "pivoted_cholesky_flat: block pivots exhausted with residual " +
            std::to_string(err) + " > tolerance; input admits no flat representation");
      out.exhausted_early = true;
      break;
    }

    if (r == alloc) {
      alloc = std::min<Eigen::Index>(cap, alloc * 2);
      L.conservativeResize(Eigen::NoChange, alloc);
      B.conservativeResize(Eigen::NoChange, alloc);
    }

    const double inv_sqrt = 1.0 / std::sqrt(dj);
    column(j, col);
    Eigen::VectorXd lrow = L.leftCols(r).row(j).transpose();
    L.col(r) = (col - L.leftCols(r) * lrow) * inv_sqrt;
    B.col(r) = (-B.leftCols(r) * lrow) * inv_sqrt;
    B(j, r) += inv_sqrt;

    d -= L.col(r).cwiseAbs2();
    d[j] = 0.0;
    taken[static_cast<std::size_t>(j)] = true;
    if (d.minCoeff() < neg_floor)
      throw NotPsdError("pivoted_cholesky: Schur complement turned indefinite");
    d = d.cwiseMax(0.0);

    out.pivots.push_back(j);
    ++r;
    err = d.sum();
    out.residual_history.push_back(err);
  }

  out.L = L.leftCols(r);
  out.B = B.leftCols(r);
  out.residual_trace = err;
  return out;
}

CholeskyFactors pivoted_cholesky(const Eigen::MatrixXd& M, const PivotedCholeskyOptions& opts) {
  if (M.rows() != M.cols()) throw InvalidInputError("pivoted_cholesky: matrix must be square");
  auto column = [&M](Eigen::Index j, Eigen::VectorXd& out) { out = M.col(j); };
  return pivoted_cholesky_impl(M.diagonal(), column, opts, false);
}

CholeskyFactors pivoted_cholesky(const MomentMatrix& M, double tolerance) {
  PivotedCholeskyOptions opts;
  opts.tolerance = tolerance;
  return pivoted_cholesky(M.values, opts);
}

CholeskyFactors pivoted_cholesky_flat(const MomentMatrix& M, double tolerance,
                                      Eigen::Index block) {
  if (M.values.rows() != M.values.cols())
    throw InvalidInputError("pivoted_cholesky_flat: matrix must be square");
  if (block < 1 || block > M.values.rows())
    throw InvalidInputError("pivoted_cholesky_flat: invalid pivot block");
  PivotedCholeskyOptions opts;
  opts.tolerance = tolerance;
  opts.pivot_block = block;
  auto column = [&M](Eigen::Index j, Eigen::VectorXd& out) { out = M.values.col(j); };
  return pivoted_cholesky_impl(M.values.diagonal(), column, opts, true);
}

OrthonormalEmbedding orthonormal_embed(const VandermondeMatrix& V,
                                       const CholeskyFactors& factors,
                                       const MomentSequence& y_hat) {
  const Eigen::Index m = V.values.cols();
  if (factors.L.rows() != m)
    throw InvalidInputError("orthonormal_embed: factor size does not match basis");
  if (y_hat.values.size() != m)
    throw InvalidInputError("orthonormal_embed: moment sequence does not match basis");

  const Eigen::Index n = V.values.rows();
  const Eigen::Index r = factors.rank();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // B vanishes off the pivot rows, so only those columns of V contribute.
  const auto& piv = factors.pivots;
  Eigen::MatrixXd B_piv(static_cast<Eigen::Index>(piv.size()), r);
  Eigen::MatrixXd V_piv(n, static_cast<Eigen::Index>(piv.size()));
  Eigen::VectorXd y_piv(static_cast<Eigen::Index>(piv.size()));
  for (std::size_t k = 0; k < piv.size(); ++k) {
    B_piv.row(static_cast<Eigen::Index>(k)) = factors.B.row(piv[k]);
    V_piv.col(static_cast<Eigen::Index>(k)) = V.values.col(piv[k]);
    y_piv[static_cast<Eigen::Index>(k)] = y_hat.values[piv[k]];
  }

  OrthonormalEmbedding out;
  out.Q = inv_sqrt_n * (V_piv * B_piv);
  out.y_tilde = inv_sqrt_n * (B_piv.transpose() * y_piv);
  return out;
}

EmbeddingBundle build_embedding(const SamplePanel& panel, int two_q, Eigen::Index max_rank) {
  VandermondeMatrix V = vandermonde(panel, two_q);
  const Eigen::Index m = V.values.cols();
  const double inv_n = 1.0 / static_cast<double>(panel.n());

  MomentSequence y_hat{detail::column_means(V.values), two_q, V.basis};

  PivotedCholeskyOptions opts;
  opts.max_rank = max_rank;
  // full rank exhaustion: the pivot floor terminates the loop
  opts.tolerance = 0.0;

  CholeskyFactors factors;
  constexpr Eigen::Index kMaterializeLimit = 4000;
  if (m <= kMaterializeLimit) {
    factors = pivoted_cholesky(detail::gram_normalized(V.values), opts);
  } else {
    // the Gramian would be too large to hold; form its columns on demand
    Eigen::VectorXd diag = V.values.colwise().squaredNorm().transpose() * inv_n;
    auto column = [&](Eigen::Index j, Eigen::VectorXd& out) {
      out.noalias() = V.values.transpose() * (V.values.col(j) * inv_n);
    };
    factors = pivoted_cholesky_impl(diag, column, opts, false);
  }

  OrthonormalEmbedding embedding = orthonormal_embed(V, factors, y_hat);
  return EmbeddingBundle{std::move(V), std::move(y_hat), std::move(factors),
                         std::move(embedding)};
}

}  // namespace empscen
