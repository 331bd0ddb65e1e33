#include "vprkit/descriptors/codebook.h"

#include <cmath>
#include <limits>

#include "vprkit/core/error.h"
#include "vprkit/core/rng.h"

namespace vprkit::descriptors {
namespace {

struct Assignment {
  int index = 0;
  double sqdist = 0.0;
};

Assignment assign(const Matrix& centroids, const Eigen::Ref<const Vector>& x) {
  Assignment best{0, std::numeric_limits<double>::infinity()};
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d2 = (centroids.row(c).transpose() - x).squaredNorm();
    if (d2 < best.sqdist) best = {static_cast<int>(c), d2};
  }
  return best;
}

Matrix seed_plus_plus(const Matrix& samples, int k, Rng& rng) {
  const Eigen::Index n = samples.rows();
  Matrix centroids(k, samples.cols());
  Eigen::Index first = static_cast<Eigen::Index>(rng.index(n));
  centroids.row(0) = samples.row(first);
  Vector d2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i) = (samples.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > r && d2(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.index(n));
    }
    centroids.row(c) = samples.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), (samples.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Matrix& samples, int k, int iters,
                    std::uint64_t seed) {
  if (k < 1) throw ArgumentError("k-means needs k >= 1");
  if (iters < 0) throw ArgumentError("k-means iterations must be >= 0");
  if (samples.rows() < k) {
    throw SizeError("k-means needs at least k=" + std::to_string(k) +
                    " samples, got " + std::to_string(samples.rows()));
  }
  const Eigen::Index n = samples.rows();
  Rng rng(mix_seed(seed, 0x4B4Du));
  Matrix centroids = seed_plus_plus(samples, k, rng);
  std::vector<Assignment> assignment(n);

  auto assign_all = [&] {
    for (Eigen::Index i = 0; i < n; ++i) {
      assignment[i] = assign(centroids, samples.row(i).transpose());
    }
  };

  for (int it = 0; it < iters; ++it) {
    assign_all();
    Matrix sums = Matrix::Zero(k, samples.cols());
    std::vector<Eigen::Index> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assignment[i].index) += samples.row(i);
      ++counts[assignment[i].index];
    }
    std::vector<bool> taken(n, false);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (far < 0 || assignment[i].sqdist > assignment[far].sqdist) far = i;
      }
      taken[far] = true;
      centroids.row(c) = samples.row(far);
    }
  }
  assign_all();

  KMeansResult result;
  result.codebook.centroids = std::move(centroids);
  result.assignments.reserve(n);
  for (const auto& a : assignment) {
    result.assignments.push_back(a.index);
    result.cost += a.sqdist;
  }
  return result;
}

Codebook kmeans_fit(const Matrix& samples, int k, int iters,
                    std::uint64_t seed) {
  return kmeans(samples, k, iters, seed).codebook;
}

int nearest_centroid(const Codebook& codebook,
                     const Eigen::Ref<const Vector>& x) {
  if (x.size() != codebook.d()) {
    throw DimensionError("feature dimension " + std::to_string(x.size()) +
                         " differs from codebook dimension " +
                         std::to_string(codebook.d()));
  }
  return assign(codebook.centroids, x).index;
}

Vector bovw_histogram(const LocalFeatureSet& features,
                      const Codebook& codebook) {
  if (features.k() > 0 && features.d() != codebook.d()) {
    throw DimensionError("feature/codebook dimension mismatch");
  }
  Vector hist = Vector::Zero(codebook.k());
  for (Eigen::Index f = 0; f < features.k(); ++f) {
    hist(nearest_centroid(codebook, features.vectors.row(f).transpose())) += 1.0;
  }
  return hist;
}

Vector aggregate_bovw(const LocalFeatureSet& features,
                      const Codebook& codebook) {
  Vector hist = bovw_histogram(features, codebook);
  const double norm = hist.norm();
  if (norm > 0.0) hist /= norm;
  return hist;
}

Vector aggregate_vlad(const LocalFeatureSet& features,
                      const Codebook& codebook) {
  if (features.k() > 0 && features.d() != codebook.d()) {
    throw DimensionError("feature/codebook dimension mismatch");
  }
  const Eigen::Index d = codebook.d();
  Vector v = Vector::Zero(codebook.k() * d);
  for (Eigen::Index f = 0; f < features.k(); ++f) {
    const Vector x = features.vectors.row(f).transpose();
    const int c = nearest_centroid(codebook, x);
    v.segment(c * d, d) += x - codebook.centroids.row(c).transpose();
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = std::copysign(std::sqrt(std::abs(v(i))), v(i));
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

}  // namespace vprkit::descriptors
