#pragma once

#include <string>
#include <vector>

#include "vprkit/core/io.h"
#include "vprkit/core/types.h"

namespace vprkit {

struct SoftRadius {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

// Box dilation of `m` by a (2*r.rows+1) x (2*r.cols+1) window, clipped at
// the borders.
BoolMatrix dilate(const BoolMatrix& m, SoftRadius r);

// gt is true exactly at `pairs`; gt_soft is its dilation. Throws IndexError
// for pairs outside `rows` x `cols`.
GroundTruth build_ground_truth(const std::vector<IndexPair>& pairs,
                               std::size_t rows, std::size_t cols,
                               SoftRadius radius = {});

struct Violation {
  std::string code;
  std::string detail;
};

// Lists every violated bundle invariant. Known codes: "gt-shape",
// "soft-shape", "soft-containment", "descriptor-nonfinite",
// "descriptor-dim", "label-count", "image-range", "single-session-db",
// "missing-db", "empty-set".
std::vector<Violation> validate_bundle(const DatasetBundle& bundle);

}  // namespace vprkit
