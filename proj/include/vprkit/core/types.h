#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vprkit {

// Dense row-major matrix used for descriptors, similarities and bases.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Marks similarity cells that were removed from consideration (for example
// non-candidates after re-ranking). Such cells never produce a match.
inline constexpr double kExcluded = -std::numeric_limits<double>::infinity();

inline bool is_excluded(double s) { return s == kExcluded; }

// H x W intensity raster with values in [0, 1], row-major.
class GrayImage {
 public:
  GrayImage() = default;
  // Throws SizeError on empty dimensions or a size mismatch and
  // ArgumentError on values outside [0, 1].
  GrayImage(int height, int width, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  double at(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  const std::vector<double>& data() const { return data_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// N x D holistic descriptors, one row per image, with optional per-row
// condition labels (used to group rows for standardization).
struct DescriptorMatrix {
  Matrix values;
  std::vector<std::string> labels;  // empty or one per row

  DescriptorMatrix() = default;
  explicit DescriptorMatrix(Matrix v, std::vector<std::string> l = {})
      : values(std::move(v)), labels(std::move(l)) {}

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index d() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }

  // Throws if d < 1, any value is non-finite or labels have the wrong length.
  void validate() const;
};

struct PixelCoord {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PixelCoord&) const = default;
};

// K local descriptors of dimension D with their pixel locations.
struct LocalFeatureSet {
  Matrix vectors;  // K x D
  std::vector<PixelCoord> coords;

  Eigen::Index k() const { return vectors.rows(); }
  Eigen::Index d() const { return vectors.cols(); }
};

enum class MetricTag { kCosine, kNegEuclidean, kRefined };

std::string to_string(MetricTag tag);
MetricTag metric_tag_from_string(const std::string& s);

// |DB| x |Q| similarity matrix; rows are database images, columns queries.
// In single-session mode both axes index the query set.
struct SimilarityMatrix {
  Matrix values;
  MetricTag tag = MetricTag::kCosine;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return values(i, j);
  }

  void validate() const;
};

// Row-major boolean matrix.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols, bool value = false)
      : rows_(rows), cols_(cols), cells_(rows * cols, value ? 1 : 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t i, std::size_t j) const {
    return cells_[i * cols_ + j] != 0;
  }
  void set(std::size_t i, std::size_t j, bool v = true) {
    cells_[i * cols_ + j] = v ? 1 : 0;
  }
  bool same_shape(const BoolMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  std::size_t count() const;
  // True where this is true and `other` is false.
  bool is_subset_of(const BoolMatrix& other) const;

  bool operator==(const BoolMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

enum class MatchMode { kSingleBest, kMultiMatch };

std::string to_string(MatchMode mode);
MatchMode match_mode_from_string(const std::string& s);

struct MatchMatrix {
  BoolMatrix cells;
  MatchMode mode = MatchMode::kMultiMatch;

  // Each column holds at most one match in single-best mode.
  bool satisfies_mode() const;
};

struct GroundTruth {
  BoolMatrix gt;
  BoolMatrix gt_soft;

  std::size_t rows() const { return gt.rows(); }
  std::size_t cols() const { return gt.cols(); }
};

enum class SessionMode { kSingle, kMulti };

std::string to_string(SessionMode mode);
SessionMode session_mode_from_string(const std::string& s);

// One side of a dataset: either raw images or precomputed descriptors.
struct ImageSet {
  std::vector<GrayImage> images;
  std::optional<DescriptorMatrix> descriptors;

  std::size_t size() const {
    return descriptors ? static_cast<std::size_t>(descriptors->n())
                       : images.size();
  }
};

struct DatasetBundle {
  std::optional<ImageSet> db;  // absent in single-session mode
  ImageSet q;
  std::optional<GroundTruth> ground_truth;
  SessionMode session = SessionMode::kMulti;

  std::size_t reference_size() const {
    return session == SessionMode::kSingle || !db ? q.size() : db->size();
  }
};

}  // namespace vprkit
