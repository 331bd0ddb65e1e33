#include "vprkit/similarity/similarity.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vprkit/core/error.h"
#include "vprkit/core/parallel.h"

namespace vprkit::similarity {

Metric metric_from_string(const std::string& s) {
  if (s == "cosine") return Metric::kCosine;
  if (s == "neg_euclidean" || s == "neg-euclidean") return Metric::kNegEuclidean;
  throw ArgumentError("unknown metric '" + s + "'");
}

SimilarityMatrix similarity_matrix(const Matrix& db, const Matrix& q,
                                   Metric metric) {
  if (db.cols() != q.cols()) {
    throw DimensionError("descriptor dimensions differ: db " +
                         std::to_string(db.cols()) + ", q " +
                         std::to_string(q.cols()));
  }
  if (db.rows() < 1 || q.rows() < 1) {
    throw SizeError("similarity matrix needs non-empty db and q");
  }
  SimilarityMatrix s;
  s.tag = metric == Metric::kCosine ? MetricTag::kCosine
                                    : MetricTag::kNegEuclidean;
  s.values.resize(db.rows(), q.rows());
  const Vector db_sq = db.rowwise().squaredNorm();

  parallel_for(static_cast<std::size_t>(q.rows()), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const auto qj = q.row(j);
    if (metric == Metric::kCosine) {
      const double q_sq = qj.squaredNorm();
      for (Eigen::Index i = 0; i < db.rows(); ++i) {
        const double denom_sq = db_sq(i) * q_sq;
        double v = 0.0;
        if (denom_sq > 0.0) {
          // sqrt(a*a) == a exactly, so identical vectors give exactly 1.
          v = std::clamp(db.row(i).dot(qj) / std::sqrt(denom_sq), -1.0, 1.0);
        }
        s.values(i, j) = v;
      }
    } else {
      for (Eigen::Index i = 0; i < db.rows(); ++i) {
        const double d2 = (db.row(i) - qj).squaredNorm();
        s.values(i, j) = d2 > 0.0 ? -std::sqrt(d2) : 0.0;
      }
    }
  });
  return s;
}

double dist_to_sim(double dist, DistanceMapping mode) {
  if (mode == DistanceMapping::kNegate) return -dist;
  if (!(dist > 0.0)) {
    throw ArgumentError("reciprocal similarity needs a positive distance");
  }
  return 1.0 / dist;
}

TopKResult knn_topk(const SimilarityMatrix& s, Eigen::Index k) {
  if (k < 1 || k > s.rows()) {
    throw ArgumentError("top-K depth " + std::to_string(k) +
                        " outside [1, " + std::to_string(s.rows()) + "]");
  }
  TopKResult out;
  out.indices.resize(static_cast<std::size_t>(s.cols()));
  out.scores.resize(static_cast<std::size_t>(s.cols()));
  parallel_for(static_cast<std::size_t>(s.cols()), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(s.rows()));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    std::partial_sort(rows.begin(), rows.begin() + k, rows.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const double sa = s(a, j);
                        const double sb = s(b, j);
                        return sa > sb || (sa == sb && a < b);
                      });
    rows.resize(static_cast<std::size_t>(k));
    std::vector<double> scores;
    scores.reserve(rows.size());
    for (Eigen::Index r : rows) scores.push_back(s(r, j));
    out.indices[jj] = std::move(rows);
    out.scores[jj] = std::move(scores);
  });
  return out;
}

}  // namespace vprkit::similarity
