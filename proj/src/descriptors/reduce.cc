#include "vprkit/descriptors/reduce.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "vprkit/core/error.h"
#include "vprkit/core/rng.h"

namespace vprkit::descriptors {

Matrix projection_matrix(int m, int d, ProjectionKind kind,
                         std::uint64_t seed) {
  if (m < 1 || d < 1) throw ArgumentError("projection dimensions must be >= 1");
  Rng rng(mix_seed(seed, 0x9A05u));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix p(m, d);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < d; ++c) {
      p(r, c) = scale *
                (kind == ProjectionKind::kGaussian ? rng.normal() : rng.sign());
    }
  }
  return p;
}

Matrix random_projection(const Matrix& x, int m, ProjectionKind kind,
                         std::uint64_t seed) {
  const Matrix p = projection_matrix(m, static_cast<int>(x.cols()), kind, seed);
  return x * p.transpose();
}

Vector PcaBasis::explained_variance_ratio() const {
  if (!(total_variance > 0.0)) return Vector::Zero(eigenvalues.size());
  return eigenvalues / total_variance;
}

PcaBasis pca_fit(const Matrix& x, int m) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (m < 1 || m > std::min<Eigen::Index>(n - 1, d)) {
    throw ArgumentError("PCA dimension " + std::to_string(m) +
                        " must be in [1, min(n-1, d)] = [1, " +
                        std::to_string(std::min<Eigen::Index>(n - 1, d)) + "]");
  }
  PcaBasis basis;
  basis.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - basis.mean.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error("PCA eigendecomposition failed");
  }
  // Eigen returns ascending eigenvalues.
  basis.components.resize(m, d);
  basis.eigenvalues.resize(m);
  for (int k = 0; k < m; ++k) {
    const Eigen::Index src = d - 1 - k;
    Vector v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    basis.components.row(k) = v.transpose();
    basis.eigenvalues(k) = std::max(0.0, solver.eigenvalues()(src));
  }
  basis.total_variance = cov.trace();
  return basis;
}

Matrix pca_apply(const Matrix& x, const PcaBasis& basis) {
  if (x.cols() != basis.mean.size()) {
    throw DimensionError("PCA input dimension mismatch");
  }
  return (x.rowwise() - basis.mean.transpose()) * basis.components.transpose();
}

Matrix pca_reconstruct(const Matrix& projected, const PcaBasis& basis) {
  if (projected.cols() != basis.m()) {
    throw DimensionError("PCA projected dimension mismatch");
  }
  return (projected * basis.components).rowwise() + basis.mean.transpose();
}

}  // namespace vprkit::descriptors
