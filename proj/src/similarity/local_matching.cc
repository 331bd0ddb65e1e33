#include "vprkit/similarity/local_matching.h"

#include <algorithm>
#include <cmath>

#include "vprkit/core/error.h"
#include "vprkit/core/parallel.h"

namespace vprkit::similarity {
namespace {

Matrix row_normalized(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double n = out.row(r).norm();
    if (n > 0.0) out.row(r) /= n;
  }
  return out;
}

}  // namespace

double mutual_match_score(const LocalFeatureSet& a, const LocalFeatureSet& b) {
  if (a.k() < 1 || b.k() < 1) {
    throw SizeError("mutual matching needs non-empty feature sets");
  }
  if (a.d() != b.d()) {
    throw DimensionError("local feature dimensions differ");
  }
  const Matrix cos = row_normalized(a.vectors) * row_normalized(b.vectors).transpose();
  std::vector<Eigen::Index> best_in_b(static_cast<std::size_t>(a.k()));
  for (Eigen::Index i = 0; i < a.k(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < b.k(); ++j) {
      if (cos(i, j) > cos(i, best)) best = j;
    }
    best_in_b[i] = best;
  }
  int mutual = 0;
  for (Eigen::Index j = 0; j < b.k(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < a.k(); ++i) {
      if (cos(i, j) > cos(best, j)) best = i;
    }
    if (best_in_b[best] == j) ++mutual;
  }
  return static_cast<double>(mutual) /
         static_cast<double>(std::min(a.k(), b.k()));
}

SimilarityMatrix rerank_topk(const SimilarityMatrix& s, const TopKResult& topk,
                             const std::vector<LocalFeatureSet>& local_db,
                             const std::vector<LocalFeatureSet>& local_q) {
  if (topk.indices.size() != static_cast<std::size_t>(s.cols())) {
    throw SizeError("top-K result does not match similarity columns");
  }
  if (local_db.size() < static_cast<std::size_t>(s.rows()) ||
      local_q.size() < static_cast<std::size_t>(s.cols())) {
    throw IndexError("missing local feature set for re-ranking: have " +
                     std::to_string(local_db.size()) + " db / " +
                     std::to_string(local_q.size()) + " q sets for a " +
                     std::to_string(s.rows()) + "x" +
                     std::to_string(s.cols()) + " matrix");
  }
  SimilarityMatrix out;
  out.tag = MetricTag::kRefined;
  out.values = Matrix::Constant(s.rows(), s.cols(), kExcluded);
  parallel_for(static_cast<std::size_t>(s.cols()), [&](std::size_t j) {
    for (Eigen::Index i : topk.indices[j]) {
      out.values(i, static_cast<Eigen::Index>(j)) =
          mutual_match_score(local_db[static_cast<std::size_t>(i)], local_q[j]);
    }
  });
  return out;
}

}  // namespace vprkit::similarity
