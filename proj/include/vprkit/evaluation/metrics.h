#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vprkit/core/types.h"

namespace vprkit::evaluation {

inline constexpr std::size_t kMaxThresholds = 1000;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t gtp = 0;
  MatchMode mode = MatchMode::kMultiMatch;

  // tp + fp == 0 yields precision 1.
  double precision() const;
  double recall() const;
};

// Ground-truth positives: queries with at least one match (single-best) or
// matching pairs (multi-match).
std::size_t ground_truth_positives(const BoolMatrix& gt, MatchMode mode);

// Counts TP (gt & m) and FP (!gt & !gt_soft & m); cells that are only soft
// positives are ignored. In single-best mode M must hold at most one match
// per column.
ConfusionCounts confusion_counts(const MatchMatrix& m, const GroundTruth& gt,
                                 MatchMode mode);

struct PRCurve {
  std::vector<double> thetas;  // descending
  std::vector<double> precision;
  std::vector<double> recall;

  std::size_t size() const { return thetas.size(); }
};

// Threshold sweep over the distinct non-excluded values of S (descending,
// subsampled by quantile to at most kMaxThresholds values keeping min and
// max). Single-best mode thresholds only each column's best cell.
PRCurve pr_curve(const SimilarityMatrix& s, const GroundTruth& gt,
                 MatchMode mode);

// Trapezoidal area of P over R, points sorted stably by ascending recall.
double auprc(const PRCurve& curve);

// Maximum recall among points with precision >= p_level, nullopt if none.
std::optional<double> recall_at_precision(const PRCurve& curve,
                                          double p_level);

struct RecallAtK {
  double value = 0.0;
  std::size_t counted = 0;
  std::size_t skipped = 0;
};

// Fraction of queries with a true match among their top-K rows. Queries
// without any true match are skipped when `skip_unmatched`, otherwise they
// are an error.
RecallAtK recall_at_k(const SimilarityMatrix& s, const GroundTruth& gt,
                      Eigen::Index k, bool skip_unmatched);

using MetricRecord = std::map<std::string, std::optional<double>>;

struct Aggregate {
  std::optional<double> mean;
  std::optional<double> best;
  std::optional<double> worst;
  std::size_t defined_count = 0;
  std::size_t undefined_count = 0;
};

// Mean, best (max) and worst (min) of every metric over the runs, ignoring
// undefined values.
std::map<std::string, Aggregate> aggregate_runs(
    const std::vector<MetricRecord>& runs);

}  // namespace vprkit::evaluation
