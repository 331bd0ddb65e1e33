#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "oracle.h"
#include "vprkit/core/ground_truth.h"
#include "vprkit/core/types.h"

namespace testutil {

inline vprkit::SimilarityMatrix to_sim(const oracle::Grid& g) {
  vprkit::SimilarityMatrix s;
  s.values.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g[0].size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[0].size(); ++j)
      s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i][j];
  return s;
}

inline vprkit::BoolMatrix to_bool(const oracle::Mask& m) {
  vprkit::BoolMatrix b(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) b.set(i, j, m[i][j]);
  return b;
}

inline oracle::Mask to_mask(const vprkit::BoolMatrix& b) {
  oracle::Mask m(b.rows(), std::vector<bool>(b.cols()));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m[i][j] = b(i, j);
  return m;
}

inline oracle::Grid uniform_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  oracle::Grid g(rows, std::vector<double>(cols));
  for (auto& row : g)
    for (auto& v : row) v = u(rng);
  return g;
}

inline oracle::Mask random_mask(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                double density) {
  std::bernoulli_distribution b(density);
  oracle::Mask m(rows, std::vector<bool>(cols));
  for (auto& row : m)
    for (std::size_t j = 0; j < cols; ++j) row[j] = b(rng);
  return m;
}

inline bool any(const oracle::Mask& m) {
  for (const auto& row : m)
    for (bool v : row)
      if (v) return true;
  return false;
}

inline vprkit::GroundTruth make_gt(const oracle::Mask& gt, const oracle::Mask& soft) {
  return vprkit::GroundTruth{to_bool(gt), to_bool(soft)};
}

inline vprkit::GroundTruth identity_gt(std::size_t n) {
  vprkit::BoolMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, i);
  return vprkit::GroundTruth{b, b};
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vprkit_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
