#include "vprkit/core/types.h"

#include <algorithm>
#include <cmath>

#include "vprkit/core/error.h"

namespace vprkit {

GrayImage::GrayImage(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (height < 1 || width < 1) {
    throw SizeError("image dimensions must be positive, got " +
                    std::to_string(height) + "x" + std::to_string(width));
  }
  if (data_.size() != static_cast<std::size_t>(height) * width) {
    throw SizeError("image data has " + std::to_string(data_.size()) +
                    " values, expected " +
                    std::to_string(static_cast<std::size_t>(height) * width));
  }
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ArgumentError("image intensity outside [0, 1]");
    }
  }
}

void DescriptorMatrix::validate() const {
  if (values.cols() < 1) throw DimensionError("descriptor dimension is 0");
  if (!values.allFinite()) throw ArgumentError("descriptor has NaN or Inf");
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n())) {
    throw SizeError("descriptor labels: " + std::to_string(labels.size()) +
                    " for " + std::to_string(n()) + " rows");
  }
}

std::string to_string(MetricTag tag) {
  switch (tag) {
    case MetricTag::kCosine:
      return "cosine";
    case MetricTag::kNegEuclidean:
      return "neg_euclidean";
    case MetricTag::kRefined:
      return "refined";
  }
  return "unknown";
}

MetricTag metric_tag_from_string(const std::string& s) {
  if (s == "cosine") return MetricTag::kCosine;
  if (s == "neg_euclidean" || s == "neg-euclidean") {
    return MetricTag::kNegEuclidean;
  }
  if (s == "refined") return MetricTag::kRefined;
  throw ArgumentError("unknown metric '" + s + "'");
}

void SimilarityMatrix::validate() const {
  if (rows() < 1 || cols() < 1) throw SizeError("empty similarity matrix");
  for (Eigen::Index i = 0; i < rows(); ++i) {
    for (Eigen::Index j = 0; j < cols(); ++j) {
      const double v = values(i, j);
      if (std::isnan(v)) throw ArgumentError("similarity matrix has NaN");
      if (tag == MetricTag::kCosine && (v < -1.0 || v > 1.0)) {
        throw ArgumentError("cosine similarity outside [-1, 1]");
      }
    }
  }
}

std::size_t BoolMatrix::count() const {
  return static_cast<std::size_t>(
      std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool BoolMatrix::is_subset_of(const BoolMatrix& other) const {
  if (!same_shape(other)) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k] && !other.cells_[k]) return false;
  }
  return true;
}

std::string to_string(MatchMode mode) {
  return mode == MatchMode::kSingleBest ? "single-best" : "multi-match";
}

MatchMode match_mode_from_string(const std::string& s) {
  if (s == "single-best" || s == "single_best") return MatchMode::kSingleBest;
  if (s == "multi-match" || s == "multi_match") return MatchMode::kMultiMatch;
  throw ArgumentError("unknown match mode '" + s + "'");
}

bool MatchMatrix::satisfies_mode() const {
  if (mode != MatchMode::kSingleBest) return true;
  for (std::size_t j = 0; j < cells.cols(); ++j) {
    int n = 0;
    for (std::size_t i = 0; i < cells.rows(); ++i) n += cells(i, j) ? 1 : 0;
    if (n > 1) return false;
  }
  return true;
}

std::string to_string(SessionMode mode) {
  return mode == SessionMode::kSingle ? "single" : "multi";
}

SessionMode session_mode_from_string(const std::string& s) {
  if (s == "single") return SessionMode::kSingle;
  if (s == "multi") return SessionMode::kMulti;
  throw ArgumentError("unknown session mode '" + s + "'");
}

}  // namespace vprkit
