#pragma once

#include <cstdint>
#include <vector>

#include "vprkit/core/types.h"

namespace vprkit::descriptors {

struct Codebook {
  Matrix centroids;  // k x d

  Eigen::Index k() const { return centroids.rows(); }
  Eigen::Index d() const { return centroids.cols(); }
};

struct KMeansResult {
  Codebook codebook;
  std::vector<int> assignments;
  double cost = 0.0;  // sum of squared distances to assigned centroids
};

// k-means++ seeding followed by exactly `iters` Lloyd iterations. Empty
// clusters are reseeded with the sample farthest from its centroid.
KMeansResult kmeans(const Matrix& samples, int k, int iters,
                    std::uint64_t seed);
Codebook kmeans_fit(const Matrix& samples, int k, int iters,
                    std::uint64_t seed);

// Index of the nearest centroid by squared Euclidean distance, lowest index
// on ties.
int nearest_centroid(const Codebook& codebook,
                     const Eigen::Ref<const Vector>& x);

// Unnormalized BoVW histogram; entries sum to the feature count.
Vector bovw_histogram(const LocalFeatureSet& features,
                      const Codebook& codebook);
// L2-normalized histogram; stays zero for empty sets.
Vector aggregate_bovw(const LocalFeatureSet& features,
                      const Codebook& codebook);

// Residual sums per centroid, signed square root, then global L2
// normalization. Dimension k*d.
Vector aggregate_vlad(const LocalFeatureSet& features,
                      const Codebook& codebook);

}  // namespace vprkit::descriptors
