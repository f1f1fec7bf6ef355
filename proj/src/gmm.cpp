#include "empscen/gmm.hpp"

#include <vector>

#include "empscen/errors.hpp"
#include "empscen/rng.hpp"

namespace empscen {

std::string to_string(CovarianceMode mode) {
  return mode == CovarianceMode::random_pd ? "random_pd" : "identity";
}

std::string to_string(MixingMode mode) { return mode == MixingMode::random ? "random" : "equal"; }

CovarianceMode covariance_mode_from_string(const std::string& name) {
  if (name == "random_pd") return CovarianceMode::random_pd;
  if (name == "identity") return CovarianceMode::identity;
  throw InvalidInputError("unknown covariance mode: " + name);
}

MixingMode mixing_mode_from_string(const std::string& name) {
  if (name == "random") return MixingMode::random;
  if (name == "equal") return MixingMode::equal;
  throw InvalidInputError("unknown mixing mode: " + name);
}

SamplePanel gen_gmm(const GmmSpec& spec) {
  if (spec.d < 1 || spec.clusters < 1 || spec.n_samples < 1)
    throw InvalidInputError("gen_gmm: d, clusters and n_samples must be >= 1");

  const int d = spec.d;
  const int c = spec.clusters;
  Rng root(spec.seed);
  Rng mean_rng = root.split("means");
  Rng cov_rng = root.split("covariances");
  Rng mix_rng = root.split("mixing");
  Rng sample_rng = root.split("samples");

  Eigen::MatrixXd means(c, d);
  for (int k = 0; k < c; ++k)
    for (int j = 0; j < d; ++j) means(k, j) = mean_rng.uniform(-50.0, 50.0);

  std::vector<Eigen::MatrixXd> roots;  // Sigma_k = A_k A_k^T
  roots.reserve(static_cast<std::size_t>(c));
  for (int k = 0; k < c; ++k) {
    if (spec.covariance == CovarianceMode::identity) {
      roots.push_back(Eigen::MatrixXd::Identity(d, d));
      continue;
    }
    Eigen::MatrixXd gaussian(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gaussian(i, j) = cov_rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
    Eigen::MatrixXd U = qr.householderQ();
    Eigen::VectorXd eigenvalues(d);
    for (int i = 0; i < d; ++i) {
      double lambda = cov_rng.normal() + 1.0;
      while (lambda <= 0.0) lambda = cov_rng.normal() + 1.0;  // reject non-positive draws
      eigenvalues[i] = lambda;
    }
    roots.push_back(U.transpose() * eigenvalues.cwiseSqrt().asDiagonal());
  }

  Eigen::VectorXd mixing(c);
  if (spec.mixing == MixingMode::equal) {
    mixing.setConstant(1.0 / static_cast<double>(c));
  } else {
    for (int k = 0; k < c; ++k) mixing[k] = mix_rng.uniform01();
    mixing /= mixing.sum();
  }
  Eigen::VectorXd cumulative(c);
  double acc = 0.0;
  for (int k = 0; k < c; ++k) {
    acc += mixing[k];
    cumulative[k] = acc;
  }
  cumulative[c - 1] = 1.0;

  Eigen::MatrixXd data(spec.n_samples, d);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < spec.n_samples; ++i) {
    const double u = sample_rng.uniform01();
    int k = 0;
    while (u > cumulative[k]) ++k;
    for (int j = 0; j < d; ++j) z[j] = sample_rng.normal();
    data.row(i) = means.row(k) + (roots[static_cast<std::size_t>(k)] * z).transpose();
  }
  return SamplePanel{std::move(data)};
}

}  // namespace empscen
