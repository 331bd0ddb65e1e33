#include "vprkit/matching/matching.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "vprkit/core/error.h"

namespace vprkit::matching {

std::vector<std::optional<Eigen::Index>> best_rows(
    const SimilarityMatrix& s, std::optional<std::size_t> exclusion_halfwidth) {
  if (exclusion_halfwidth && s.rows() != s.cols()) {
    throw ArgumentError(
        "recent-match exclusion requires a square single-session matrix");
  }
  std::vector<std::optional<Eigen::Index>> out(
      static_cast<std::size_t>(s.cols()));
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    std::optional<Eigen::Index> best;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      if (exclusion_halfwidth &&
          static_cast<std::size_t>(std::abs(i - j)) <= *exclusion_halfwidth) {
        continue;
      }
      const double v = s(i, j);
      if (is_excluded(v)) continue;
      if (!best || v > s(*best, j)) best = i;
    }
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

MatchMatrix best_match_per_query(
    const SimilarityMatrix& s, std::optional<std::size_t> exclusion_halfwidth) {
  MatchMatrix m{BoolMatrix(static_cast<std::size_t>(s.rows()),
                           static_cast<std::size_t>(s.cols())),
                MatchMode::kSingleBest};
  const auto rows = best_rows(s, exclusion_halfwidth);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j]) m.cells.set(static_cast<std::size_t>(*rows[j]), j);
  }
  return m;
}

MatchMatrix threshold_match(const SimilarityMatrix& s, double theta) {
  MatchMatrix m{BoolMatrix(static_cast<std::size_t>(s.rows()),
                           static_cast<std::size_t>(s.cols())),
                MatchMode::kMultiMatch};
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (!is_excluded(v) && v >= theta) {
        m.cells.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
  return m;
}

double auto_threshold(const SimilarityMatrix& s) {
  constexpr int kBins = 256;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    throw ArgumentError("no separation: similarity matrix is constant");
  }
  const double width = (hi - lo) / kBins;
  auto bin_of = [&](double v) {
    return std::min(kBins - 1, static_cast<int>((v - lo) / width));
  };

  std::array<double, kBins> hist{};
  std::array<double, kBins> bin_min;
  std::array<double, kBins> bin_max;
  bin_min.fill(std::numeric_limits<double>::infinity());
  bin_max.fill(-std::numeric_limits<double>::infinity());
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (!std::isfinite(v)) continue;
      const int b = bin_of(v);
      hist[b] += 1.0;
      bin_min[b] = std::min(bin_min[b], v);
      bin_max[b] = std::max(bin_max[b], v);
      total += 1.0;
    }
  }

  double sum_all = 0.0;
  for (int b = 0; b < kBins; ++b) sum_all += b * hist[b];

  // Between-class variance of the split {0..t} | {t+1..255}; first maximum
  // wins.
  double w0 = 0.0;
  double sum0 = 0.0;
  double best_var = -1.0;
  int best_t = 0;
  for (int t = 0; t < kBins - 1; ++t) {
    w0 += hist[t];
    sum0 += t * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  const double edge = lo + (best_t + 1) * width;
  // Keep both classes intact under rounding of the bin edge.
  double upper_min = std::numeric_limits<double>::infinity();
  double lower_max = -std::numeric_limits<double>::infinity();
  for (int b = 0; b <= best_t; ++b) lower_max = std::max(lower_max, bin_max[b]);
  for (int b = best_t + 1; b < kBins; ++b) {
    upper_min = std::min(upper_min, bin_min[b]);
  }
  if (edge <= lower_max) return upper_min;
  return std::min(edge, upper_min);
}

}  // namespace vprkit::matching
