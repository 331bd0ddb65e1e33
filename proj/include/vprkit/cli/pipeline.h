#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vprkit/cli/config.h"
#include "vprkit/core/ground_truth.h"
#include "vprkit/core/types.h"
#include "vprkit/descriptors/extract.h"
#include "vprkit/evaluation/metrics.h"
#include "vprkit/similarity/sequence.h"
#include "vprkit/similarity/similarity.h"
#include "vprkit/synth/synthgen.h"

namespace vprkit::cli {

// A failure inside one pipeline stage.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& cause)
      : Error("stage '" + stage + "': " + cause), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct SynthSpec {
  synth::WorldConfig world;
  std::string db_script = "visit 0 10 1";
  std::string q_script = "visit 0 10 1";
  double db_noise = 0.0;
  double q_noise = 0.0;
  double q_bias_norm = 0.0;
  double q_scale_min = 1.0;
  double q_scale_max = 1.0;
};

enum class DatasetKind { kSynth, kImages, kDescriptors };

struct DatasetSpec {
  std::string name = "dataset";
  DatasetKind kind = DatasetKind::kSynth;
  SessionMode session = SessionMode::kMulti;
  std::filesystem::path db;  // image directory / list file, or VPRD file
  std::filesystem::path q;
  std::optional<std::filesystem::path> gt;       // pairs text or VPRB
  std::optional<std::filesystem::path> gt_soft;  // VPRB, overrides radius
  SynthSpec synth;
};

enum class DescriptorMethod { kImported, kPatchNorm, kBovw, kVlad };

struct DescriptorSpec {
  DescriptorMethod method = DescriptorMethod::kImported;
  descriptors::PatchNormParams patchnorm;
  descriptors::LocalGridParams local;
  int codebook_k = 16;
  int kmeans_iters = 20;
  // Optional sequence descriptor (length 1 = off).
  int sequence_length = 1;
  similarity::SequenceMode sequence_mode = similarity::SequenceMode::kMean;
};

enum class StandardizeMethod { kNone, kCondition, kCluster };

struct StandardizeSpec {
  StandardizeMethod method = StandardizeMethod::kNone;
  int clusters = 2;
  int iters = 20;
};

enum class ReductionMethod { kNone, kPca, kGaussian, kSign };

struct ReductionSpec {
  ReductionMethod method = ReductionMethod::kNone;
  int dim = 0;
};

struct SimilaritySpec {
  similarity::Metric metric = similarity::Metric::kCosine;
  similarity::SeqParams seq{1, 0.8, 1.2, 5};
  int rerank_k = 0;
};

struct MatchingSpec {
  MatchMode mode = MatchMode::kSingleBest;
  std::optional<double> threshold;  // nullopt: automatic
  std::optional<std::size_t> exclusion;
};

struct EvaluationSpec {
  bool enabled = true;
  SoftRadius soft_radius;
  std::vector<long> recall_ks{1, 5, 10};
};

struct RunConfig {
  DatasetSpec dataset;
  DescriptorSpec descriptor;
  StandardizeSpec standardize;
  ReductionSpec reduction;
  SimilaritySpec similarity;
  MatchingSpec matching;
  EvaluationSpec evaluation;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  // Resolves a parsed config; relative paths are taken relative to the
  // config's directory. Throws ConfigError on bad or unknown keys.
  static RunConfig from_config(const Config& cfg);
  void validate() const;
  // Full resolved configuration, embedded in reports.
  nlohmann::json to_json() const;
};

struct LoadedDataset {
  DatasetBundle bundle;
  std::vector<int> db_place_ids;
  std::vector<int> q_place_ids;
};

// Materializes the dataset (generating it for synthetic specs).
LoadedDataset load_dataset(const RunConfig& config);

struct ExtractedDescriptors {
  std::optional<DescriptorMatrix> db;  // absent in single-session mode
  DescriptorMatrix q;
  std::vector<LocalFeatureSet> local_db;
  std::vector<LocalFeatureSet> local_q;
};

ExtractedDescriptors extract_descriptors(const RunConfig& config,
                                         const DatasetBundle& bundle);

// Rounds every value to float32, the precision of exported matrices.
SimilarityMatrix quantize(const SimilarityMatrix& s);

struct EvalOptions {
  MatchMode mode = MatchMode::kSingleBest;
  std::optional<double> threshold;
  std::optional<std::size_t> exclusion;
  std::vector<long> recall_ks{1, 5, 10};
};

struct Decisions {
  MatchMatrix matches;
  std::optional<double> threshold;  // used in multi-match mode
};

Decisions decide(const SimilarityMatrix& s, const EvalOptions& options);

struct EvalSummary {
  evaluation::ConfusionCounts counts;
  evaluation::PRCurve curve;
  double auprc = 0.0;
  std::optional<double> r_at_100p;
  std::optional<double> r_at_99p;
  std::optional<double> r_at_95p;
  std::vector<std::pair<long, std::optional<double>>> recall_at_k;
  std::size_t skipped = 0;
};

// Shared by `pipeline` and `eval` so that both report identical metrics for
// the same S. An exclusion band is removed from both S and GT.
EvalSummary evaluate(const SimilarityMatrix& s, const GroundTruth& gt,
                     const MatchMatrix& decisions, const EvalOptions& options);

struct PipelineResult {
  SimilarityMatrix similarity;
  Decisions decisions;
  std::optional<GroundTruth> ground_truth;
  std::optional<EvalSummary> eval;
};

PipelineResult run_pipeline(const RunConfig& config);

}  // namespace vprkit::cli
