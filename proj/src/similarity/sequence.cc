#include "vprkit/similarity/sequence.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vprkit/core/error.h"
#include "vprkit/core/parallel.h"

namespace vprkit::similarity {

void SeqParams::validate() const {
  if (length < 1 || length % 2 == 0) {
    throw ArgumentError("sequence length must be odd and >= 1");
  }
  if (!(v_min > 0.0) || !(v_max >= v_min)) {
    throw ArgumentError("slopes must satisfy 0 < v_min <= v_max");
  }
  if (v_steps < 1) throw ArgumentError("v_steps must be >= 1");
}

std::vector<double> SeqParams::slopes() const {
  if (v_steps == 1) return {v_min};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(v_steps));
  for (int k = 0; k < v_steps; ++k) {
    out.push_back(v_min + (v_max - v_min) * k / (v_steps - 1));
  }
  return out;
}

SimilarityMatrix seq_refine(const SimilarityMatrix& s, const SeqParams& p) {
  p.validate();
  if (p.length == 1) return s;
  const int half = (p.length - 1) / 2;
  const Eigen::Index rows = s.rows();
  const Eigen::Index cols = s.cols();

  // Row offsets per slope and time step.
  std::vector<std::vector<long>> offsets;
  for (double v : p.slopes()) {
    std::vector<long> o;
    for (int t = -half; t <= half; ++t) o.push_back(std::lround(v * t));
    offsets.push_back(std::move(o));
  }

  SimilarityMatrix out;
  out.tag = MetricTag::kRefined;
  out.values.resize(rows, cols);
  parallel_for(static_cast<std::size_t>(cols), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    for (Eigen::Index i = 0; i < rows; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& o : offsets) {
        double sum = 0.0;
        for (int t = -half; t <= half; ++t) {
          const Eigen::Index r =
              std::clamp<Eigen::Index>(i + o[t + half], 0, rows - 1);
          const Eigen::Index c = std::clamp<Eigen::Index>(j + t, 0, cols - 1);
          sum += s(r, c);
        }
        best = std::max(best, sum / p.length);
      }
      out.values(i, j) = best;
    }
  });
  return out;
}

SequenceMode sequence_mode_from_string(const std::string& s) {
  if (s == "concat") return SequenceMode::kConcat;
  if (s == "mean") return SequenceMode::kMean;
  if (s == "delta") return SequenceMode::kDelta;
  throw ArgumentError("unknown sequence mode '" + s + "'");
}

DescriptorMatrix sequence_descriptors(const DescriptorMatrix& d, int length,
                                      SequenceMode mode) {
  if (length < 1 || length % 2 == 0) {
    throw ArgumentError("sequence length must be odd and >= 1");
  }
  if (length > d.n()) {
    throw SizeError("sequence length " + std::to_string(length) +
                    " exceeds descriptor count " + std::to_string(d.n()));
  }
  const int half = (length - 1) / 2;
  const Eigen::Index n = d.n();
  const Eigen::Index dim = d.d();
  auto frame = [&](Eigen::Index j, int t) {
    return d.values.row(std::clamp<Eigen::Index>(j + t, 0, n - 1));
  };

  Matrix out(n, mode == SequenceMode::kConcat ? dim * length : dim);
  for (Eigen::Index j = 0; j < n; ++j) {
    switch (mode) {
      case SequenceMode::kConcat:
        for (int t = -half; t <= half; ++t) {
          out.row(j).segment((t + half) * dim, dim) = frame(j, t);
        }
        break;
      case SequenceMode::kMean: {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(dim);
        for (int t = -half; t <= half; ++t) acc += frame(j, t);
        out.row(j) = acc / length;
        break;
      }
      case SequenceMode::kDelta: {
        Eigen::RowVectorXd delta = Eigen::RowVectorXd::Zero(dim);
        if (half > 0) {
          for (int t = 1; t <= half; ++t) delta += frame(j, t) - frame(j, -t);
          delta /= half;
          const double norm = delta.norm();
          if (norm > 0.0) delta /= norm;
        }
        out.row(j) = delta;
        break;
      }
    }
  }
  return DescriptorMatrix(std::move(out), d.labels);
}

}  // namespace vprkit::similarity
