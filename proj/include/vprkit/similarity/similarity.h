#pragma once

#include <vector>

#include "vprkit/core/types.h"

namespace vprkit::similarity {

enum class Metric { kCosine, kNegEuclidean };

Metric metric_from_string(const std::string& s);

// S(i, j) compares db row i with q row j. Cosine against a zero vector is
// defined as 0.
SimilarityMatrix similarity_matrix(const Matrix& db, const Matrix& q,
                                   Metric metric);

enum class DistanceMapping { kNegate, kReciprocal };

// s = -dist or s = 1/dist (dist must be > 0 for the reciprocal).
double dist_to_sim(double dist, DistanceMapping mode);

// Per query column, the K database rows with the largest similarity.
struct TopKResult {
  std::vector<std::vector<Eigen::Index>> indices;  // [column][rank]
  std::vector<std::vector<double>> scores;

  std::size_t k() const { return indices.empty() ? 0 : indices[0].size(); }
};

// Exhaustive scan; ties go to the lower row index.
TopKResult knn_topk(const SimilarityMatrix& s, Eigen::Index k);

}  // namespace vprkit::similarity
