#pragma once

#include <cstdint>
#include <string>

#include "empscen/sample_panel.hpp"

namespace empscen {

enum class CovarianceMode { random_pd, identity };
enum class MixingMode { random, equal };

std::string to_string(CovarianceMode mode);
std::string to_string(MixingMode mode);
CovarianceMode covariance_mode_from_string(const std::string& name);
MixingMode mixing_mode_from_string(const std::string& name);

struct GmmSpec {
  int d = 2;
  int clusters = 1;
  CovarianceMode covariance = CovarianceMode::random_pd;
  MixingMode mixing = MixingMode::random;
  Eigen::Index n_samples = 2000;
  std::uint64_t seed = 0;
};

/// Gaussian-mixture panel: cluster means uniform on (-50, 50)^d, covariances
/// either the identity or U^T diag(lambda) U with an orthogonal U from the QR
/// of a Gaussian matrix and N(1,1) eigenvalues resampled until positive.
/// Mixing proportions are normalized uniform draws or 1/c. Bit-identical per
/// seed.
SamplePanel gen_gmm(const GmmSpec& spec);

}  // namespace empscen
