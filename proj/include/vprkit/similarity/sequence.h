#pragma once

#include <vector>

#include "vprkit/core/types.h"

namespace vprkit::similarity {

struct SeqParams {
  int length = 5;  // odd
  double v_min = 0.8;
  double v_max = 1.2;
  int v_steps = 5;

  void validate() const;
  // v_steps slopes spaced linearly in [v_min, v_max].
  std::vector<double> slopes() const;
};

// For every cell, the best mean similarity along a line segment of `length`
// samples centred on it. Sample t in [-(L-1)/2, (L-1)/2] reads
// S(i + round(v*t), j + t), indices clamped to the matrix.
SimilarityMatrix seq_refine(const SimilarityMatrix& s, const SeqParams& p);

enum class SequenceMode { kConcat, kMean, kDelta };

SequenceMode sequence_mode_from_string(const std::string& s);

// Combines a centred window of `length` consecutive descriptors (borders
// replicated) into one vector per frame.
DescriptorMatrix sequence_descriptors(const DescriptorMatrix& d, int length,
                                      SequenceMode mode);

}  // namespace vprkit::similarity
