#include "vprkit/descriptors/standardize.h"

#include <algorithm>
#include <cmath>

#include "vprkit/core/error.h"
#include "vprkit/descriptors/codebook.h"

namespace vprkit::descriptors {
namespace {

GroupStats stats_of(const Matrix& x, const std::vector<Eigen::Index>& rows) {
  const double n = static_cast<double>(rows.size());
  GroupStats s{Vector::Zero(x.cols()), Vector::Zero(x.cols())};
  for (Eigen::Index r : rows) s.mean += x.row(r).transpose();
  s.mean /= n;
  for (Eigen::Index r : rows) {
    s.stddev += (x.row(r).transpose() - s.mean).cwiseAbs2();
  }
  s.stddev = (s.stddev / n).cwiseSqrt();
  return s;
}

std::vector<Eigen::Index> all_rows(Eigen::Index n) {
  std::vector<Eigen::Index> rows(n);
  for (Eigen::Index i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

}  // namespace

StandardizationStats standardize_fit(const Matrix& x,
                                     const std::vector<std::string>& labels) {
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw SizeError("one group label per descriptor row is required");
  }
  std::map<std::string, std::vector<Eigen::Index>> members;
  for (Eigen::Index i = 0; i < x.rows(); ++i) members[labels[i]].push_back(i);
  StandardizationStats stats;
  for (const auto& [label, rows] : members) {
    if (rows.size() < 2) {
      throw SizeError("standardization group '" + label + "' has " +
                      std::to_string(rows.size()) + " row(s), need >= 2");
    }
    stats.groups.emplace(label, stats_of(x, rows));
  }
  return stats;
}

Matrix standardize_apply(const Matrix& x, const StandardizationStats& stats,
                         const std::vector<std::string>& labels) {
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw SizeError("one group label per descriptor row is required");
  }
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto it = stats.groups.find(labels[i]);
    if (it == stats.groups.end()) {
      throw ArgumentError("no standardization stats for group '" + labels[i] +
                          "'");
    }
    const GroupStats& g = it->second;
    if (g.mean.size() != x.cols()) {
      throw DimensionError("standardization stats dimension mismatch");
    }
    out.row(i) = ((x.row(i).transpose() - g.mean).array() /
                  g.stddev.array().max(kStdFloor))
                     .transpose();
  }
  return out;
}

DescriptorMatrix standardize(const DescriptorMatrix& d) {
  const std::vector<std::string> labels =
      d.has_labels() ? d.labels
                     : std::vector<std::string>(static_cast<std::size_t>(d.n()));
  const auto stats = standardize_fit(d.values, labels);
  return DescriptorMatrix(standardize_apply(d.values, stats, labels), d.labels);
}

DescriptorMatrix cluster_standardize(const DescriptorMatrix& d, int k,
                                     int iters, std::uint64_t seed) {
  if (k < 1 || d.n() < 2 * static_cast<Eigen::Index>(k)) {
    throw SizeError("cluster standardization needs n >= 2k (n=" +
                    std::to_string(d.n()) + ", k=" + std::to_string(k) + ")");
  }
  const KMeansResult km = kmeans(d.values, k, iters, seed);
  std::vector<std::vector<Eigen::Index>> members(k);
  for (Eigen::Index i = 0; i < d.n(); ++i) members[km.assignments[i]].push_back(i);

  const GroupStats global = stats_of(d.values, all_rows(d.n()));
  Matrix out(d.n(), d.d());
  for (int c = 0; c < k; ++c) {
    if (members[c].empty()) continue;
    const GroupStats g =
        members[c].size() >= 2 ? stats_of(d.values, members[c]) : global;
    for (Eigen::Index i : members[c]) {
      out.row(i) = ((d.values.row(i).transpose() - g.mean).array() /
                    g.stddev.array().max(kStdFloor))
                       .transpose();
    }
  }
  return DescriptorMatrix(std::move(out), d.labels);
}

}  // namespace vprkit::descriptors
