#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vprkit/core/types.h"

namespace vprkit::descriptors {

inline constexpr double kStdFloor = 1e-9;

struct GroupStats {
  Vector mean;
  Vector stddev;  // population standard deviation, unfloored
};

struct StandardizationStats {
  std::map<std::string, GroupStats> groups;
};

// Per-group, per-dimension mean and population std. Every group needs at
// least two rows.
StandardizationStats standardize_fit(const Matrix& x,
                                     const std::vector<std::string>& labels);

// (x - mean) / max(std, 1e-9) with the stats of each row's group.
Matrix standardize_apply(const Matrix& x, const StandardizationStats& stats,
                         const std::vector<std::string>& labels);

DescriptorMatrix standardize(const DescriptorMatrix& d);

// Clusters rows with k-means and standardizes each cluster. Clusters with
// fewer than two rows use the global statistics. Requires n >= 2k.
DescriptorMatrix cluster_standardize(const DescriptorMatrix& d, int k,
                                     int iters, std::uint64_t seed);

}  // namespace vprkit::descriptors
