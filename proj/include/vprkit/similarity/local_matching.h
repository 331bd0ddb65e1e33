#pragma once

#include <vector>

#include "vprkit/core/types.h"
#include "vprkit/similarity/similarity.h"

namespace vprkit::similarity {

// Fraction of mutual cosine nearest neighbours between two local feature
// sets: count / min(K_a, K_b).
double mutual_match_score(const LocalFeatureSet& a, const LocalFeatureSet& b);

// Replaces the top-K candidate cells of every column by the mutual match
// score of the corresponding local feature sets. All other cells become
// kExcluded. The result is tagged kRefined.
SimilarityMatrix rerank_topk(const SimilarityMatrix& s, const TopKResult& topk,
                             const std::vector<LocalFeatureSet>& local_db,
                             const std::vector<LocalFeatureSet>& local_q);

}  // namespace vprkit::similarity
