#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace empscen {

/// Daily excess returns in percent units, one asset per column.
struct ReturnsPanel {
  std::vector<std::string> dates;
  Eigen::MatrixXd returns;  // T x d
  std::vector<std::string> asset_names;
  Eigen::Index rows_dropped = 0;  // rows removed for missing-value codes

  Eigen::Index size() const { return returns.rows(); }
  Eigen::Index dim() const { return returns.cols(); }
};

enum class ReturnsFormat { famafrench_csv, plain_csv };

/// famafrench_csv skips the textual preamble until the header row, parses
/// YYYYMMDD dates, treats -99.99 and -999 as missing and drops those rows
/// (count reported on the panel). plain_csv expects one date token followed
/// by d floats per row. Parse failures name the offending line.
ReturnsPanel load_returns(const std::string& path, ReturnsFormat format);

/// Seeded stand-in when no returns file is available: a Gaussian mixture
/// over d assets at daily-percent scale, with one low-volatility asset so
/// CVaR caps taken from naive-portfolio quantiles stay reachable.
ReturnsPanel synthetic_returns(std::uint64_t seed, Eigen::Index T, int d = 25);

}  // namespace empscen
