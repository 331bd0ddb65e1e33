#pragma once

#include <cstdint>

#include "vprkit/core/types.h"

namespace vprkit::descriptors {

// Bilinear resize with pixel-center alignment and border clamping.
GrayImage resize_bilinear(const GrayImage& image, int height, int width);

struct PatchNormParams {
  int grid_rows = 4;
  int grid_cols = 4;
  int patch = 8;
};

// Downsample to (grid_rows*patch) x (grid_cols*patch), z-score every
// patch x patch block on its own (sigma floored at 1e-6) and concatenate the
// blocks row-major. Result has grid_rows*grid_cols*patch^2 entries.
Vector holistic_patchnorm(const GrayImage& image, const PatchNormParams& p);

struct LocalGridParams {
  int stride = 8;
  int patch = 8;
  // Output dimension; values below patch^2 trigger a seeded sign random
  // projection, 0 or >= patch^2 keeps the raw z-scored patch.
  int d_out = 0;
  std::uint64_t projection_seed = 0x5EED;
};

// Dense grid of z-scored patches. Coordinates are patch centers (x, y),
// enumerated row by row.
LocalFeatureSet extract_local_grid(const GrayImage& image,
                                   const LocalGridParams& p);

}  // namespace vprkit::descriptors
