#include "vprkit/core/ground_truth.h"

#include <algorithm>
#include <cmath>

#include "vprkit/core/error.h"

namespace vprkit {

BoolMatrix dilate(const BoolMatrix& m, SoftRadius r) {
  BoolMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j)) continue;
      const std::size_t i0 = i >= r.rows ? i - r.rows : 0;
      const std::size_t j0 = j >= r.cols ? j - r.cols : 0;
      const std::size_t i1 = std::min(m.rows() - 1, i + r.rows);
      const std::size_t j1 = std::min(m.cols() - 1, j + r.cols);
      for (std::size_t a = i0; a <= i1; ++a) {
        for (std::size_t b = j0; b <= j1; ++b) out.set(a, b);
      }
    }
  }
  return out;
}

GroundTruth build_ground_truth(const std::vector<IndexPair>& pairs,
                               std::size_t rows, std::size_t cols,
                               SoftRadius radius) {
  BoolMatrix gt(rows, cols);
  for (const auto& [i, j] : pairs) {
    if (i >= rows || j >= cols) {
      throw IndexError("ground-truth pair (" + std::to_string(i) + ", " +
                       std::to_string(j) + ") outside " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
    gt.set(i, j);
  }
  BoolMatrix soft = dilate(gt, radius);
  return GroundTruth{std::move(gt), std::move(soft)};
}

namespace {

void check_set(const ImageSet& set, const char* name,
               std::optional<Eigen::Index>& dim,
               std::vector<Violation>& out) {
  if (set.size() == 0) {
    out.push_back({"empty-set", std::string(name) + " has no entries"});
  }
  if (set.descriptors) {
    const auto& d = *set.descriptors;
    if (!d.values.allFinite()) {
      out.push_back({"descriptor-nonfinite",
                     std::string(name) + " descriptors contain NaN or Inf"});
    }
    if (d.d() < 1 || (dim && *dim != d.d())) {
      out.push_back({"descriptor-dim",
                     std::string(name) + " descriptor dimension " +
                         std::to_string(d.d()) + " is inconsistent"});
    }
    dim = d.d();
    if (d.has_labels() && d.labels.size() != static_cast<std::size_t>(d.n())) {
      out.push_back({"label-count",
                     std::string(name) + " label count differs from rows"});
    }
  }
  for (std::size_t k = 0; k < set.images.size(); ++k) {
    for (double v : set.images[k].data()) {
      if (!(v >= 0.0 && v <= 1.0)) {
        out.push_back({"image-range", std::string(name) + " image " +
                                          std::to_string(k) +
                                          " has values outside [0, 1]"});
        break;
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate_bundle(const DatasetBundle& bundle) {
  std::vector<Violation> out;
  std::optional<Eigen::Index> dim;
  if (bundle.session == SessionMode::kSingle && bundle.db) {
    out.push_back({"single-session-db",
                   "single-session bundles must not carry a database set"});
  }
  if (bundle.session == SessionMode::kMulti && !bundle.db) {
    out.push_back({"missing-db", "multi-session bundle has no database set"});
  }
  if (bundle.db) check_set(*bundle.db, "db", dim, out);
  check_set(bundle.q, "q", dim, out);

  if (bundle.ground_truth) {
    const auto& gt = *bundle.ground_truth;
    const std::size_t rows = bundle.reference_size();
    const std::size_t cols = bundle.q.size();
    if (gt.gt.rows() != rows || gt.gt.cols() != cols) {
      out.push_back({"gt-shape", "GT is " + std::to_string(gt.gt.rows()) +
                                     "x" + std::to_string(gt.gt.cols()) +
                                     ", expected " + std::to_string(rows) +
                                     "x" + std::to_string(cols)});
    }
    if (!gt.gt.same_shape(gt.gt_soft)) {
      out.push_back({"soft-shape", "GT and GT_soft shapes differ"});
    } else if (!gt.gt.is_subset_of(gt.gt_soft)) {
      out.push_back({"soft-containment", "GT is true where GT_soft is false"});
    }
  }
  return out;
}

}  // namespace vprkit
