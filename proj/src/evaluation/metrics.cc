#include "vprkit/evaluation/metrics.h"

#include <algorithm>
#include <cmath>

#include "vprkit/core/error.h"
#include "vprkit/matching/matching.h"
#include "vprkit/similarity/similarity.h"

namespace vprkit::evaluation {
namespace {

void check_shape(std::size_t rows, std::size_t cols, const GroundTruth& gt) {
  if (gt.gt.rows() != rows || gt.gt.cols() != cols ||
      !gt.gt.same_shape(gt.gt_soft)) {
    throw DimensionError("ground truth is " + std::to_string(gt.gt.rows()) +
                         "x" + std::to_string(gt.gt.cols()) + ", expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

struct Cell {
  double value;
  bool positive;  // gt
  bool negative;  // !gt && !gt_soft
};

}  // namespace

double ConfusionCounts::precision() const {
  if (tp + fp == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double ConfusionCounts::recall() const {
  if (gtp == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(gtp);
}

std::size_t ground_truth_positives(const BoolMatrix& gt, MatchMode mode) {
  if (mode == MatchMode::kMultiMatch) return gt.count();
  std::size_t n = 0;
  for (std::size_t j = 0; j < gt.cols(); ++j) {
    for (std::size_t i = 0; i < gt.rows(); ++i) {
      if (gt(i, j)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

ConfusionCounts confusion_counts(const MatchMatrix& m, const GroundTruth& gt,
                                 MatchMode mode) {
  check_shape(m.cells.rows(), m.cells.cols(), gt);
  if (mode == MatchMode::kSingleBest) {
    MatchMatrix probe = m;
    probe.mode = MatchMode::kSingleBest;
    if (!probe.satisfies_mode()) {
      throw ArgumentError(
          "single-best evaluation needs at most one match per column");
    }
  }
  ConfusionCounts c;
  c.mode = mode;
  for (std::size_t i = 0; i < m.cells.rows(); ++i) {
    for (std::size_t j = 0; j < m.cells.cols(); ++j) {
      if (!m.cells(i, j)) continue;
      if (gt.gt(i, j)) {
        ++c.tp;
      } else if (!gt.gt_soft(i, j)) {
        ++c.fp;
      }
    }
  }
  c.gtp = ground_truth_positives(gt.gt, mode);
  c.fn = c.gtp - std::min(c.gtp, c.tp);
  return c;
}

PRCurve pr_curve(const SimilarityMatrix& s, const GroundTruth& gt,
                 MatchMode mode) {
  const auto rows = static_cast<std::size_t>(s.rows());
  const auto cols = static_cast<std::size_t>(s.cols());
  check_shape(rows, cols, gt);
  const std::size_t gtp = ground_truth_positives(gt.gt, mode);
  if (gtp == 0) throw ArgumentError("no ground-truth positives");

  std::vector<double> values;
  values.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!is_excluded(v)) values.push_back(v);
    }
  }
  if (values.empty()) throw ArgumentError("similarity matrix has no eligible cells");
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> thetas;
  if (values.size() <= kMaxThresholds) {
    thetas = values;
  } else {
    const double step = static_cast<double>(values.size() - 1) /
                        static_cast<double>(kMaxThresholds - 1);
    for (std::size_t k = 0; k < kMaxThresholds; ++k) {
      thetas.push_back(values[static_cast<std::size_t>(std::llround(k * step))]);
    }
  }

  // Candidate decisions, sorted by descending similarity.
  auto make_cell = [&](std::size_t i, std::size_t j) {
    return Cell{s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                gt.gt(i, j), !gt.gt(i, j) && !gt.gt_soft(i, j)};
  };
  std::vector<Cell> cells;
  if (mode == MatchMode::kSingleBest) {
    const auto best = matching::best_rows(s);
    for (std::size_t j = 0; j < cols; ++j) {
      if (best[j]) cells.push_back(make_cell(static_cast<std::size_t>(*best[j]), j));
    }
  } else {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (!is_excluded(s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
          cells.push_back(make_cell(i, j));
        }
      }
    }
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) { return a.value > b.value; });

  PRCurve curve;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t next = 0;
  for (double theta : thetas) {
    while (next < cells.size() && cells[next].value >= theta) {
      tp += cells[next].positive ? 1 : 0;
      fp += cells[next].negative ? 1 : 0;
      ++next;
    }
    curve.thetas.push_back(theta);
    curve.precision.push_back(
        tp + fp == 0 ? 1.0
                     : static_cast<double>(tp) / static_cast<double>(tp + fp));
    curve.recall.push_back(static_cast<double>(tp) / static_cast<double>(gtp));
  }
  return curve;
}

double auprc(const PRCurve& curve) {
  std::vector<std::size_t> order(curve.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return curve.recall[a] < curve.recall[b];
  });
  double area = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const std::size_t a = order[k - 1];
    const std::size_t b = order[k];
    area += (curve.recall[b] - curve.recall[a]) *
            (curve.precision[a] + curve.precision[b]) / 2.0;
  }
  return area;
}

std::optional<double> recall_at_precision(const PRCurve& curve,
                                          double p_level) {
  if (!(p_level > 0.0 && p_level <= 1.0)) {
    throw ArgumentError("precision level must be in (0, 1]");
  }
  std::optional<double> best;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve.precision[k] >= p_level && (!best || curve.recall[k] > *best)) {
      best = curve.recall[k];
    }
  }
  return best;
}

RecallAtK recall_at_k(const SimilarityMatrix& s, const GroundTruth& gt,
                      Eigen::Index k, bool skip_unmatched) {
  check_shape(static_cast<std::size_t>(s.rows()),
              static_cast<std::size_t>(s.cols()), gt);
  const auto topk = similarity::knn_topk(s, k);
  RecallAtK r;
  std::size_t hits = 0;
  for (std::size_t j = 0; j < gt.cols(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < gt.rows() && !any; ++i) any = gt.gt(i, j);
    if (!any) {
      if (!skip_unmatched) {
        throw ArgumentError("query " + std::to_string(j) +
                            " has no ground-truth match; recall@K undefined");
      }
      ++r.skipped;
      continue;
    }
    ++r.counted;
    for (Eigen::Index i : topk.indices[j]) {
      if (gt.gt(static_cast<std::size_t>(i), j)) {
        ++hits;
        break;
      }
    }
  }
  r.value = r.counted == 0 ? 0.0
                           : static_cast<double>(hits) /
                                 static_cast<double>(r.counted);
  return r;
}

std::map<std::string, Aggregate> aggregate_runs(
    const std::vector<MetricRecord>& runs) {
  if (runs.empty()) throw ArgumentError("no runs to aggregate");
  std::map<std::string, Aggregate> out;
  std::map<std::string, double> sums;
  for (const auto& run : runs) {
    for (const auto& [name, value] : run) {
      Aggregate& a = out[name];
      if (!value) {
        ++a.undefined_count;
        continue;
      }
      ++a.defined_count;
      sums[name] += *value;
      a.best = a.best ? std::max(*a.best, *value) : *value;
      a.worst = a.worst ? std::min(*a.worst, *value) : *value;
    }
  }
  for (auto& [name, a] : out) {
    if (a.defined_count > 0) {
      a.mean = sums[name] / static_cast<double>(a.defined_count);
    }
  }
  return out;
}

}  // namespace vprkit::evaluation
