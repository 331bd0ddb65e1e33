#pragma once

#include <cstddef>
#include <optional>

#include "vprkit/core/types.h"

namespace vprkit::matching {

// Single-best-match decisions: the argmax row of each column (lowest row on
// ties). With `exclusion_halfwidth` set, S must be square (single-session)
// and rows with |i - j| <= halfwidth are not eligible for column j. Columns
// without eligible, non-excluded cells get no match.
MatchMatrix best_match_per_query(
    const SimilarityMatrix& s,
    std::optional<std::size_t> exclusion_halfwidth = std::nullopt);

// Row index of the best match for every column, or nullopt.
std::vector<std::optional<Eigen::Index>> best_rows(
    const SimilarityMatrix& s,
    std::optional<std::size_t> exclusion_halfwidth = std::nullopt);

// Multi-match decisions: m_ij = s_ij >= theta. Excluded cells never match.
MatchMatrix threshold_match(const SimilarityMatrix& s, double theta);

// Otsu split of a 256-bin histogram over [min(S), max(S)] of the non-excluded
// cells. Returns the lower edge of the first bin above the split. Throws
// ArgumentError when S holds fewer than two distinct values.
double auto_threshold(const SimilarityMatrix& s);

}  // namespace vprkit::matching
