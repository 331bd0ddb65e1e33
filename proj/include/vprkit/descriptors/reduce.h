#pragma once

#include <cstdint>

#include "vprkit/core/types.h"

namespace vprkit::descriptors {

enum class ProjectionKind { kGaussian, kSign };

// m x d projection matrix; entries N(0,1)/sqrt(m) or +-1/sqrt(m), drawn
// row-major from the seeded generator.
Matrix projection_matrix(int m, int d, ProjectionKind kind,
                         std::uint64_t seed);

// X * P^T.
Matrix random_projection(const Matrix& x, int m, ProjectionKind kind,
                         std::uint64_t seed);

struct PcaBasis {
  Vector mean;          // d
  Matrix components;    // m x d, orthonormal rows
  Vector eigenvalues;   // m, descending
  double total_variance = 0.0;

  Eigen::Index m() const { return components.rows(); }
  Vector explained_variance_ratio() const;
};

// Top-m eigenvectors of the sample covariance. Each component is signed so
// that its largest-magnitude entry is positive. Requires m <= min(n-1, d).
PcaBasis pca_fit(const Matrix& x, int m);
Matrix pca_apply(const Matrix& x, const PcaBasis& basis);
// Maps projected rows back to descriptor space.
Matrix pca_reconstruct(const Matrix& projected, const PcaBasis& basis);

}  // namespace vprkit::descriptors
