#include "vprkit/descriptors/extract.h"

#include <algorithm>
#include <cmath>

#include "vprkit/core/error.h"
#include "vprkit/descriptors/reduce.h"

namespace vprkit::descriptors {
namespace {

constexpr double kPatchStdFloor = 1e-6;

// z-scores `block` in place with population statistics.
void zscore(Vector& block) {
  if (block.maxCoeff() == block.minCoeff()) {
    block.setZero();
    return;
  }
  const double mean = block.mean();
  block.array() -= mean;
  const double sd = std::sqrt(block.squaredNorm() / block.size());
  block /= std::max(sd, kPatchStdFloor);
}

Vector extract_block(const GrayImage& img, int top, int left, int size) {
  Vector block(size * size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) block(r * size + c) = img.at(top + r, left + c);
  }
  return block;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& image, int height, int width) {
  if (height < 1 || width < 1) throw SizeError("resize target must be >= 1x1");
  const int src_h = image.height();
  const int src_w = image.width();
  std::vector<double> out(static_cast<std::size_t>(height) * width);
  const double sy = static_cast<double>(src_h) / height;
  const double sx = static_cast<double>(src_w) / width;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, src_h - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, src_h - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, src_w - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, src_w - 1);
      const double wx = fx - x0;
      const double top = image.at(y0, x0) * (1.0 - wx) + image.at(y0, x1) * wx;
      const double bottom =
          image.at(y1, x0) * (1.0 - wx) + image.at(y1, x1) * wx;
      out[static_cast<std::size_t>(y) * width + x] =
          std::clamp(top * (1.0 - wy) + bottom * wy, 0.0, 1.0);
    }
  }
  return GrayImage(height, width, std::move(out));
}

Vector holistic_patchnorm(const GrayImage& image, const PatchNormParams& p) {
  if (p.grid_rows < 1 || p.grid_cols < 1 || p.patch < 1) {
    throw SizeError("patchnorm grid and patch must be >= 1");
  }
  if (image.height() < p.patch || image.width() < p.patch) {
    throw SizeError("image " + std::to_string(image.height()) + "x" +
                    std::to_string(image.width()) +
                    " smaller than patch " + std::to_string(p.patch));
  }
  const GrayImage small =
      resize_bilinear(image, p.grid_rows * p.patch, p.grid_cols * p.patch);
  const int block_len = p.patch * p.patch;
  Vector out(p.grid_rows * p.grid_cols * block_len);
  for (int gr = 0; gr < p.grid_rows; ++gr) {
    for (int gc = 0; gc < p.grid_cols; ++gc) {
      Vector block = extract_block(small, gr * p.patch, gc * p.patch, p.patch);
      zscore(block);
      out.segment((gr * p.grid_cols + gc) * block_len, block_len) = block;
    }
  }
  return out;
}

LocalFeatureSet extract_local_grid(const GrayImage& image,
                                   const LocalGridParams& p) {
  if (p.patch < 1 || p.stride < 1) {
    throw SizeError("local grid patch and stride must be >= 1");
  }
  if (p.patch > image.height() || p.patch > image.width()) {
    throw SizeError("local patch " + std::to_string(p.patch) +
                    " larger than image " + std::to_string(image.height()) +
                    "x" + std::to_string(image.width()));
  }
  const int raw_dim = p.patch * p.patch;
  const bool project = p.d_out > 0 && p.d_out < raw_dim;

  std::vector<Vector> patches;
  LocalFeatureSet set;
  for (int y = 0; y + p.patch <= image.height(); y += p.stride) {
    for (int x = 0; x + p.patch <= image.width(); x += p.stride) {
      Vector block = extract_block(image, y, x, p.patch);
      zscore(block);
      patches.push_back(std::move(block));
      set.coords.push_back({x + p.patch / 2.0, y + p.patch / 2.0});
    }
  }
  Matrix raw(static_cast<Eigen::Index>(patches.size()), raw_dim);
  for (std::size_t k = 0; k < patches.size(); ++k) {
    raw.row(static_cast<Eigen::Index>(k)) = patches[k].transpose();
  }
  set.vectors = project ? random_projection(raw, p.d_out, ProjectionKind::kSign,
                                            p.projection_seed)
                        : std::move(raw);
  return set;
}

}  // namespace vprkit::descriptors
