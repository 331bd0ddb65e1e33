#include "vprkit/cli/pipeline.h"

#include <algorithm>
#include <functional>

#include "vprkit/core/io.h"
#include "vprkit/core/parallel.h"
#include "vprkit/core/rng.h"
#include "vprkit/descriptors/codebook.h"
#include "vprkit/descriptors/reduce.h"
#include "vprkit/descriptors/standardize.h"
#include "vprkit/matching/matching.h"
#include "vprkit/similarity/local_matching.h"

namespace vprkit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams derived from the run seed.
enum SeedStream : std::uint64_t {
  kStreamQueryCondition = 7,
  kStreamCodebook = 11,
  kStreamProjection = 13,
  kStreamClusters = 17,
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

fs::path resolve(const Config& cfg, const std::string& value) {
  fs::path p(value);
  if (p.is_relative() && !cfg.base_dir().empty()) p = cfg.base_dir() / p;
  return p;
}

template <typename E>
E pick(const Config& cfg, const std::string& section, const std::string& key,
       const std::string& fallback,
       std::initializer_list<std::pair<const char*, E>> options) {
  const std::string v = cfg.get_string(section, key, fallback);
  for (const auto& [name, value] : options) {
    if (v == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : options) {
    allowed += (allowed.empty() ? "" : "|") + std::string(name);
  }
  cfg.fail(section, key, "expected one of " + allowed + ", got '" + v + "'");
}

std::vector<fs::path> list_images(const fs::path& where) {
  std::vector<fs::path> out;
  if (fs::is_directory(where)) {
    for (const auto& entry : fs::directory_iterator(where)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
        out.push_back(entry.path());
      }
    }
    std::sort(out.begin(), out.end());
  } else {
    // List file: one path per line, relative to the list's directory.
    std::istringstream in(read_file(where));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      fs::path p(line);
      out.push_back(p.is_relative() ? where.parent_path() / p : p);
    }
  }
  if (out.empty()) throw IoError("no PGM images found at '" + where.string() + "'");
  return out;
}

std::vector<GrayImage> load_images(const fs::path& where) {
  std::vector<GrayImage> images;
  for (const auto& p : list_images(where)) images.push_back(load_pgm(p));
  return images;
}

DescriptorMatrix with_default_labels(DescriptorMatrix d, const std::string& label) {
  if (!d.has_labels()) d.labels.assign(static_cast<std::size_t>(d.n()), label);
  return d;
}

Matrix stack_rows(const std::vector<Vector>& rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

SimilarityMatrix mask_recent(const SimilarityMatrix& s, std::size_t halfwidth) {
  if (s.rows() != s.cols()) {
    throw ArgumentError("recent-match exclusion requires a square matrix");
  }
  SimilarityMatrix out = s;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if (static_cast<std::size_t>(std::abs(i - j)) <= halfwidth) {
        out.values(i, j) = kExcluded;
      }
    }
  }
  return out;
}

// Band cells can never be matched, so they leave the ground truth too.
GroundTruth mask_recent(const GroundTruth& gt, std::size_t halfwidth) {
  GroundTruth out = gt;
  for (std::size_t i = 0; i < gt.rows(); ++i) {
    for (std::size_t j = 0; j < gt.cols(); ++j) {
      if ((i > j ? i - j : j - i) <= halfwidth) {
        out.gt.set(i, j, false);
        out.gt_soft.set(i, j, false);
      }
    }
  }
  return out;
}

}  // namespace

// --- configuration ----------------------------------------------------------

RunConfig RunConfig::from_config(const Config& cfg) {
  RunConfig rc;
  rc.seed = cfg.get_u64("run", "seed", 0);
  rc.out = resolve(cfg, cfg.get_string("run", "out", "out"));

  auto& ds = rc.dataset;
  ds.name = cfg.get_string("dataset", "name", ds.name);
  ds.kind = pick<DatasetKind>(cfg, "dataset", "kind", "synth",
                              {{"synth", DatasetKind::kSynth},
                               {"images", DatasetKind::kImages},
                               {"descriptors", DatasetKind::kDescriptors}});
  ds.session = pick<SessionMode>(cfg, "dataset", "session", "multi",
                                 {{"multi", SessionMode::kMulti},
                                  {"single", SessionMode::kSingle}});
  if (cfg.has("dataset", "db")) ds.db = resolve(cfg, cfg.get_string("dataset", "db", ""));
  if (cfg.has("dataset", "q")) ds.q = resolve(cfg, cfg.get_string("dataset", "q", ""));
  if (cfg.has("dataset", "gt")) ds.gt = resolve(cfg, cfg.get_string("dataset", "gt", ""));
  if (cfg.has("dataset", "gt_soft")) {
    ds.gt_soft = resolve(cfg, cfg.get_string("dataset", "gt_soft", ""));
  }

  auto& sy = ds.synth;
  sy.world.n_places = static_cast<int>(cfg.get_int("synth", "n_places", 10));
  sy.world.latent_dim = static_cast<int>(cfg.get_int("synth", "latent_dim", 32));
  sy.world.aliasing_pairs = static_cast<int>(cfg.get_int("synth", "aliasing_pairs", 0));
  sy.world.seed = rc.seed;
  sy.db_script = cfg.get_string("synth", "db_script", sy.db_script);
  sy.q_script = cfg.get_string("synth", "q_script", sy.q_script);
  sy.db_noise = cfg.get_double("synth", "db_noise", 0.0);
  sy.q_noise = cfg.get_double("synth", "q_noise", 0.0);
  sy.q_bias_norm = cfg.get_double("synth", "q_bias_norm", 0.0);
  sy.q_scale_min = cfg.get_double("synth", "q_scale_min", 1.0);
  sy.q_scale_max = cfg.get_double("synth", "q_scale_max", 1.0);
  for (const char* key : {"db_script", "q_script"}) {
    if (cfg.has("synth", key)) {
      try {
        synth::parse_events(cfg.get_string("synth", key, ""));
      } catch (const Error& e) {
        cfg.fail("synth", key, e.what());
      }
    }
  }

  auto& de = rc.descriptor;
  de.method = pick<DescriptorMethod>(cfg, "descriptor", "method", "imported",
                                     {{"imported", DescriptorMethod::kImported},
                                      {"patchnorm", DescriptorMethod::kPatchNorm},
                                      {"bovw", DescriptorMethod::kBovw},
                                      {"vlad", DescriptorMethod::kVlad}});
  de.patchnorm.grid_rows = static_cast<int>(cfg.get_int("descriptor", "grid_rows", 4));
  de.patchnorm.grid_cols = static_cast<int>(cfg.get_int("descriptor", "grid_cols", 4));
  de.patchnorm.patch = static_cast<int>(cfg.get_int("descriptor", "patch", 8));
  de.local.stride = static_cast<int>(cfg.get_int("descriptor", "local_stride", 8));
  de.local.patch = static_cast<int>(cfg.get_int("descriptor", "local_patch", 8));
  de.local.d_out = static_cast<int>(cfg.get_int("descriptor", "local_dim", 0));
  de.local.projection_seed = mix_seed(rc.seed, kStreamProjection);
  de.codebook_k = static_cast<int>(cfg.get_int("descriptor", "codebook_k", 16));
  de.kmeans_iters = static_cast<int>(cfg.get_int("descriptor", "kmeans_iters", 20));
  de.sequence_length = static_cast<int>(cfg.get_int("descriptor", "sequence_length", 1));
  de.sequence_mode = pick<similarity::SequenceMode>(
      cfg, "descriptor", "sequence_mode", "mean",
      {{"concat", similarity::SequenceMode::kConcat},
       {"mean", similarity::SequenceMode::kMean},
       {"delta", similarity::SequenceMode::kDelta}});

  rc.standardize.method = pick<StandardizeMethod>(
      cfg, "standardize", "method", "none",
      {{"none", StandardizeMethod::kNone},
       {"condition", StandardizeMethod::kCondition},
       {"cluster", StandardizeMethod::kCluster}});
  rc.standardize.clusters = static_cast<int>(cfg.get_int("standardize", "clusters", 2));
  rc.standardize.iters = static_cast<int>(cfg.get_int("standardize", "iters", 20));

  rc.reduction.method = pick<ReductionMethod>(cfg, "reduction", "method", "none",
                                              {{"none", ReductionMethod::kNone},
                                               {"pca", ReductionMethod::kPca},
                                               {"gaussian", ReductionMethod::kGaussian},
                                               {"sign", ReductionMethod::kSign}});
  rc.reduction.dim = static_cast<int>(cfg.get_int("reduction", "dim", 0));

  auto& si = rc.similarity;
  si.metric = pick<similarity::Metric>(cfg, "similarity", "metric", "cosine",
                                       {{"cosine", similarity::Metric::kCosine},
                                        {"neg_euclidean", similarity::Metric::kNegEuclidean}});
  si.seq.length = static_cast<int>(cfg.get_int("similarity", "seq_length", 1));
  si.seq.v_min = cfg.get_double("similarity", "seq_v_min", 0.8);
  si.seq.v_max = cfg.get_double("similarity", "seq_v_max", 1.2);
  si.seq.v_steps = static_cast<int>(cfg.get_int("similarity", "seq_v_steps", 5));
  si.rerank_k = static_cast<int>(cfg.get_int("similarity", "rerank_k", 0));

  auto& ma = rc.matching;
  ma.mode = pick<MatchMode>(cfg, "matching", "mode", "single-best",
                            {{"single-best", MatchMode::kSingleBest},
                             {"multi-match", MatchMode::kMultiMatch}});
  const std::string threshold = cfg.get_string("matching", "threshold", "auto");
  if (threshold != "auto") ma.threshold = cfg.get_double("matching", "threshold", 0.0);
  const std::string exclusion = cfg.get_string("matching", "exclusion", "none");
  if (exclusion != "none") {
    const long h = cfg.get_int("matching", "exclusion", 0);
    if (h < 0) cfg.fail("matching", "exclusion", "must be >= 0 or 'none'");
    ma.exclusion = static_cast<std::size_t>(h);
  }

  auto& ev = rc.evaluation;
  ev.enabled = cfg.get_bool("evaluation", "enabled", true);
  if (cfg.has("evaluation", "mode")) {
    const auto m = pick<MatchMode>(cfg, "evaluation", "mode", "",
                                   {{"single-best", MatchMode::kSingleBest},
                                    {"multi-match", MatchMode::kMultiMatch}});
    if (m != ma.mode) {
      cfg.fail("evaluation", "mode", "must agree with [matching] mode");
    }
  }
  const long rr = cfg.get_int("evaluation", "soft_radius_rows", 0);
  const long rcol = cfg.get_int("evaluation", "soft_radius_cols", 0);
  if (rr < 0) cfg.fail("evaluation", "soft_radius_rows", "must be >= 0");
  if (rcol < 0) cfg.fail("evaluation", "soft_radius_cols", "must be >= 0");
  ev.soft_radius = {static_cast<std::size_t>(rr), static_cast<std::size_t>(rcol)};
  ev.recall_ks = cfg.get_int_list("evaluation", "recall_k", ev.recall_ks);
  for (long k : ev.recall_ks) {
    if (k < 1) cfg.fail("evaluation", "recall_k", "K values must be >= 1");
  }

  cfg.reject_unused();
  return rc;
}

void RunConfig::validate() const {
  const bool images = dataset.kind == DatasetKind::kImages;
  if (images && descriptor.method == DescriptorMethod::kImported) {
    throw ArgumentError("image datasets need a descriptor method other than 'imported'");
  }
  if (!images && descriptor.method != DescriptorMethod::kImported) {
    throw ArgumentError("descriptor method '" +
                        std::string(descriptor.method == DescriptorMethod::kPatchNorm
                                        ? "patchnorm"
                                        : "local aggregation") +
                        "' requires an image dataset");
  }
  if (similarity.rerank_k > 0 && !images) {
    throw ArgumentError("re-ranking requires an image dataset");
  }
  if (matching.exclusion && dataset.session != SessionMode::kSingle) {
    throw ArgumentError("recent-match exclusion is only valid in single-session mode");
  }
  if (dataset.kind != DatasetKind::kSynth) {
    if (dataset.q.empty()) throw ArgumentError("dataset.q is required");
    if (dataset.session == SessionMode::kMulti && dataset.db.empty()) {
      throw ArgumentError("dataset.db is required in multi-session mode");
    }
    if (dataset.session == SessionMode::kSingle && !dataset.db.empty()) {
      throw ArgumentError("single-session datasets take only dataset.q");
    }
    for (const auto* p : {&dataset.db, &dataset.q}) {
      if (!p->empty() && !fs::exists(*p)) {
        throw IoError("'" + p->string() + "' does not exist");
      }
    }
    for (const auto* p : {&dataset.gt, &dataset.gt_soft}) {
      if (*p && !fs::exists(**p)) throw IoError("'" + (*p)->string() + "' does not exist");
    }
  } else {
    dataset.synth.world.validate();
  }
  similarity.seq.validate();
  if (reduction.method != ReductionMethod::kNone && reduction.dim < 1) {
    throw ArgumentError("reduction.dim must be >= 1");
  }
  if (descriptor.sequence_length < 1 || descriptor.sequence_length % 2 == 0) {
    throw ArgumentError("descriptor.sequence_length must be odd and >= 1");
  }
}

namespace {

const char* name_of(DatasetKind k) {
  switch (k) {
    case DatasetKind::kSynth: return "synth";
    case DatasetKind::kImages: return "images";
    case DatasetKind::kDescriptors: return "descriptors";
  }
  return "";
}
const char* name_of(DescriptorMethod m) {
  switch (m) {
    case DescriptorMethod::kImported: return "imported";
    case DescriptorMethod::kPatchNorm: return "patchnorm";
    case DescriptorMethod::kBovw: return "bovw";
    case DescriptorMethod::kVlad: return "vlad";
  }
  return "";
}
const char* name_of(StandardizeMethod m) {
  switch (m) {
    case StandardizeMethod::kNone: return "none";
    case StandardizeMethod::kCondition: return "condition";
    case StandardizeMethod::kCluster: return "cluster";
  }
  return "";
}
const char* name_of(ReductionMethod m) {
  switch (m) {
    case ReductionMethod::kNone: return "none";
    case ReductionMethod::kPca: return "pca";
    case ReductionMethod::kGaussian: return "gaussian";
    case ReductionMethod::kSign: return "sign";
  }
  return "";
}
const char* name_of(similarity::SequenceMode m) {
  switch (m) {
    case similarity::SequenceMode::kConcat: return "concat";
    case similarity::SequenceMode::kMean: return "mean";
    case similarity::SequenceMode::kDelta: return "delta";
  }
  return "";
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["run"] = {{"seed", seed}, {"out", out.generic_string()}};
  json ds = {{"name", dataset.name},
             {"kind", name_of(dataset.kind)},
             {"session", to_string(dataset.session)}};
  if (dataset.kind == DatasetKind::kSynth) {
    const auto& sy = dataset.synth;
    ds["synth"] = {{"n_places", sy.world.n_places},
                   {"latent_dim", sy.world.latent_dim},
                   {"aliasing_pairs", sy.world.aliasing_pairs},
                   {"db_script", sy.db_script},
                   {"q_script", sy.q_script},
                   {"db_noise", sy.db_noise},
                   {"q_noise", sy.q_noise},
                   {"q_bias_norm", sy.q_bias_norm},
                   {"q_scale_min", sy.q_scale_min},
                   {"q_scale_max", sy.q_scale_max}};
  } else {
    ds["db"] = dataset.db.generic_string();
    ds["q"] = dataset.q.generic_string();
  }
  ds["gt"] = dataset.gt ? json(dataset.gt->generic_string()) : json(nullptr);
  ds["gt_soft"] = dataset.gt_soft ? json(dataset.gt_soft->generic_string()) : json(nullptr);
  j["dataset"] = ds;
  j["descriptor"] = {{"method", name_of(descriptor.method)},
                     {"grid_rows", descriptor.patchnorm.grid_rows},
                     {"grid_cols", descriptor.patchnorm.grid_cols},
                     {"patch", descriptor.patchnorm.patch},
                     {"local_stride", descriptor.local.stride},
                     {"local_patch", descriptor.local.patch},
                     {"local_dim", descriptor.local.d_out},
                     {"codebook_k", descriptor.codebook_k},
                     {"kmeans_iters", descriptor.kmeans_iters},
                     {"sequence_length", descriptor.sequence_length},
                     {"sequence_mode", name_of(descriptor.sequence_mode)}};
  j["standardize"] = {{"method", name_of(standardize.method)},
                      {"clusters", standardize.clusters},
                      {"iters", standardize.iters}};
  j["reduction"] = {{"method", name_of(reduction.method)}, {"dim", reduction.dim}};
  j["similarity"] = {
      {"metric", similarity.metric == similarity::Metric::kCosine ? "cosine" : "neg_euclidean"},
      {"seq_length", similarity.seq.length},
      {"seq_v_min", similarity.seq.v_min},
      {"seq_v_max", similarity.seq.v_max},
      {"seq_v_steps", similarity.seq.v_steps},
      {"rerank_k", similarity.rerank_k}};
  j["matching"] = {{"mode", to_string(matching.mode)},
                   {"threshold", matching.threshold ? json(*matching.threshold) : json("auto")},
                   {"exclusion", matching.exclusion ? json(*matching.exclusion) : json("none")}};
  j["evaluation"] = {{"enabled", evaluation.enabled},
                     {"soft_radius_rows", evaluation.soft_radius.rows},
                     {"soft_radius_cols", evaluation.soft_radius.cols},
                     {"recall_k", evaluation.recall_ks}};
  return j;
}

// --- stages -----------------------------------------------------------------

LoadedDataset load_dataset(const RunConfig& config) {
  const DatasetSpec& ds = config.dataset;
  LoadedDataset out;
  out.bundle.session = ds.session;
  const bool single = ds.session == SessionMode::kSingle;

  if (ds.kind == DatasetKind::kSynth) {
    const SynthSpec& sy = ds.synth;
    const synth::World world = synth::generate_world(sy.world);
    synth::TraverseScript q_script;
    q_script.events = synth::parse_events(sy.q_script);
    q_script.noise_sigma = sy.q_noise;
    q_script.seed = 2;
    const synth::Condition cond =
        synth::make_condition(sy.world.latent_dim, sy.q_bias_norm, sy.q_scale_min,
                              sy.q_scale_max, mix_seed(config.seed, kStreamQueryCondition));
    q_script.condition_bias = cond.bias;
    q_script.condition_scale = cond.scale;
    synth::Traverse q = synth::generate_traverse(world, q_script);
    out.bundle.q.descriptors = with_default_labels(q.descriptors, "q");
    out.q_place_ids = q.place_ids;
    if (single) {
      out.bundle.ground_truth = synth::derive_gt(q, q, config.evaluation.soft_radius);
    } else {
      synth::TraverseScript db_script;
      db_script.events = synth::parse_events(sy.db_script);
      db_script.noise_sigma = sy.db_noise;
      db_script.seed = 1;
      synth::Traverse db = synth::generate_traverse(world, db_script);
      out.bundle.ground_truth = synth::derive_gt(db, q, config.evaluation.soft_radius);
      out.bundle.db = ImageSet{{}, with_default_labels(db.descriptors, "db")};
      out.db_place_ids = db.place_ids;
    }
    return out;
  }

  if (ds.kind == DatasetKind::kImages) {
    out.bundle.q.images = load_images(ds.q);
    if (!single) out.bundle.db = ImageSet{load_images(ds.db), std::nullopt};
  } else {
    out.bundle.q.descriptors = with_default_labels(read_descriptors(ds.q), "q");
    if (!single) {
      out.bundle.db = ImageSet{{}, with_default_labels(read_descriptors(ds.db), "db")};
    }
  }

  if (ds.gt) {
    const std::size_t rows = out.bundle.reference_size();
    const std::size_t cols = out.bundle.q.size();
    GroundTruth gt;
    if (ds.gt->extension() == ".vprb") {
      gt.gt = read_bool_matrix(*ds.gt);
    } else {
      gt = build_ground_truth(read_pairs(*ds.gt), rows, cols);
    }
    gt.gt_soft = ds.gt_soft ? read_bool_matrix(*ds.gt_soft)
                            : dilate(gt.gt, config.evaluation.soft_radius);
    out.bundle.ground_truth = std::move(gt);
  }
  return out;
}

ExtractedDescriptors extract_descriptors(const RunConfig& config,
                                         const DatasetBundle& bundle) {
  const DescriptorSpec& spec = config.descriptor;
  const bool single = bundle.session == SessionMode::kSingle || !bundle.db;
  ExtractedDescriptors out;

  auto local_sets = [&](const std::vector<GrayImage>& images) {
    std::vector<LocalFeatureSet> sets(images.size());
    parallel_for(images.size(), [&](std::size_t k) {
      sets[k] = descriptors::extract_local_grid(images[k], spec.local);
    });
    return sets;
  };

  if (spec.method == DescriptorMethod::kImported) {
    out.q = *bundle.q.descriptors;
    if (!single) out.db = *bundle.db->descriptors;
  } else {
    const bool local = spec.method == DescriptorMethod::kBovw ||
                       spec.method == DescriptorMethod::kVlad;
    if (local || config.similarity.rerank_k > 0) {
      out.local_q = local_sets(bundle.q.images);
      if (!single) out.local_db = local_sets(bundle.db->images);
    }
    std::function<Vector(std::size_t, bool)> describe;
    descriptors::Codebook codebook;
    if (local) {
      const auto& reference = single ? out.local_q : out.local_db;
      std::vector<Vector> samples;
      for (const auto& set : reference) {
        for (Eigen::Index r = 0; r < set.k(); ++r) {
          samples.push_back(set.vectors.row(r).transpose());
        }
      }
      codebook = descriptors::kmeans_fit(stack_rows(samples), spec.codebook_k,
                                         spec.kmeans_iters,
                                         mix_seed(config.seed, kStreamCodebook));
      describe = [&](std::size_t k, bool is_db) {
        const auto& set = is_db ? out.local_db[k] : out.local_q[k];
        return spec.method == DescriptorMethod::kBovw
                   ? descriptors::aggregate_bovw(set, codebook)
                   : descriptors::aggregate_vlad(set, codebook);
      };
    } else {
      describe = [&](std::size_t k, bool is_db) {
        const auto& img = is_db ? bundle.db->images[k] : bundle.q.images[k];
        return descriptors::holistic_patchnorm(img, spec.patchnorm);
      };
    }
    auto describe_all = [&](std::size_t n, bool is_db, const char* label) {
      std::vector<Vector> rows(n);
      parallel_for(n, [&](std::size_t k) { rows[k] = describe(k, is_db); });
      return DescriptorMatrix(stack_rows(rows),
                              std::vector<std::string>(n, label));
    };
    out.q = describe_all(bundle.q.images.size(), false, "q");
    if (!single) out.db = describe_all(bundle.db->images.size(), true, "db");
  }

  // Standardization over the union of both sets, grouped by condition label
  // or by cluster.
  if (config.standardize.method != StandardizeMethod::kNone) {
    const Eigen::Index n_db = out.db ? out.db->n() : 0;
    Matrix all(n_db + out.q.n(), out.q.d());
    std::vector<std::string> labels;
    if (out.db) {
      if (out.db->d() != out.q.d()) throw DimensionError("db and q descriptor dimensions differ");
      all.topRows(n_db) = out.db->values;
      labels = out.db->labels;
    }
    all.bottomRows(out.q.n()) = out.q.values;
    labels.insert(labels.end(), out.q.labels.begin(), out.q.labels.end());
    DescriptorMatrix joined(std::move(all), std::move(labels));
    const DescriptorMatrix standardized =
        config.standardize.method == StandardizeMethod::kCondition
            ? descriptors::standardize(joined)
            : descriptors::cluster_standardize(joined, config.standardize.clusters,
                                               config.standardize.iters,
                                               mix_seed(config.seed, kStreamClusters));
    if (out.db) out.db->values = standardized.values.topRows(n_db);
    out.q.values = standardized.values.bottomRows(out.q.n());
  }

  if (config.reduction.method == ReductionMethod::kPca) {
    const auto basis = descriptors::pca_fit(out.db ? out.db->values : out.q.values,
                                            config.reduction.dim);
    if (out.db) out.db->values = descriptors::pca_apply(out.db->values, basis);
    out.q.values = descriptors::pca_apply(out.q.values, basis);
  } else if (config.reduction.method != ReductionMethod::kNone) {
    const auto kind = config.reduction.method == ReductionMethod::kGaussian
                          ? descriptors::ProjectionKind::kGaussian
                          : descriptors::ProjectionKind::kSign;
    const auto seed = mix_seed(config.seed, kStreamProjection);
    if (out.db) {
      out.db->values = descriptors::random_projection(out.db->values, config.reduction.dim, kind, seed);
    }
    out.q.values = descriptors::random_projection(out.q.values, config.reduction.dim, kind, seed);
  }

  if (spec.sequence_length > 1) {
    if (out.db) {
      out.db = similarity::sequence_descriptors(*out.db, spec.sequence_length, spec.sequence_mode);
    }
    out.q = similarity::sequence_descriptors(out.q, spec.sequence_length, spec.sequence_mode);
  }
  return out;
}

SimilarityMatrix quantize(const SimilarityMatrix& s) {
  SimilarityMatrix out = s;
  out.values = s.values.cast<float>().cast<double>();
  return out;
}

Decisions decide(const SimilarityMatrix& s, const EvalOptions& options) {
  Decisions d;
  if (options.mode == MatchMode::kSingleBest) {
    d.matches = matching::best_match_per_query(s, options.exclusion);
  } else {
    const SimilarityMatrix masked =
        options.exclusion ? mask_recent(s, *options.exclusion) : s;
    d.threshold = options.threshold ? *options.threshold
                                    : matching::auto_threshold(masked);
    d.matches = matching::threshold_match(masked, *d.threshold);
  }
  return d;
}

EvalSummary evaluate(const SimilarityMatrix& s, const GroundTruth& full_gt,
                     const MatchMatrix& decisions, const EvalOptions& options) {
  const SimilarityMatrix masked =
      options.exclusion ? mask_recent(s, *options.exclusion) : s;
  const GroundTruth gt =
      options.exclusion ? mask_recent(full_gt, *options.exclusion) : full_gt;
  EvalSummary e;
  e.counts = evaluation::confusion_counts(decisions, gt, options.mode);
  e.curve = evaluation::pr_curve(masked, gt, options.mode);
  e.auprc = evaluation::auprc(e.curve);
  e.r_at_100p = evaluation::recall_at_precision(e.curve, 1.0);
  e.r_at_99p = evaluation::recall_at_precision(e.curve, 0.99);
  e.r_at_95p = evaluation::recall_at_precision(e.curve, 0.95);
  for (long k : options.recall_ks) {
    if (k > masked.rows()) {
      e.recall_at_k.emplace_back(k, std::nullopt);
      continue;
    }
    const auto r = evaluation::recall_at_k(masked, gt, k, true);
    e.recall_at_k.emplace_back(k, r.value);
  }
  for (std::size_t j = 0; j < gt.cols(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < gt.rows() && !any; ++i) any = gt.gt(i, j);
    if (!any) ++e.skipped;
  }
  return e;
}

PipelineResult run_pipeline(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  const LoadedDataset data = stage("dataset", [&] {
    LoadedDataset d = load_dataset(config);
    const auto violations = validate_bundle(d.bundle);
    if (!violations.empty()) {
      throw Error("invalid dataset: " + violations.front().code + " (" +
                  violations.front().detail + ")");
    }
    return d;
  });
  const ExtractedDescriptors desc =
      stage("extract", [&] { return extract_descriptors(config, data.bundle); });

  PipelineResult result;
  result.similarity = stage("similarity", [&] {
    const Matrix& reference = desc.db ? desc.db->values : desc.q.values;
    SimilarityMatrix s = similarity::similarity_matrix(reference, desc.q.values,
                                                       config.similarity.metric);
    if (config.similarity.seq.length > 1) {
      s = similarity::seq_refine(s, config.similarity.seq);
    }
    if (config.similarity.rerank_k > 0) {
      const auto k = std::min<Eigen::Index>(config.similarity.rerank_k, s.rows());
      const auto topk = similarity::knn_topk(s, k);
      s = similarity::rerank_topk(s, topk, desc.db ? desc.local_db : desc.local_q,
                                  desc.local_q);
    }
    return quantize(s);
  });

  const EvalOptions options{config.matching.mode, config.matching.threshold,
                            config.matching.exclusion, config.evaluation.recall_ks};
  result.decisions = stage("matching", [&] { return decide(result.similarity, options); });

  if (config.evaluation.enabled) {
    result.eval = stage("evaluation", [&] {
      if (!data.bundle.ground_truth) {
        throw Error("evaluation requires ground truth");
      }
      return evaluate(result.similarity, *data.bundle.ground_truth,
                      result.decisions.matches, options);
    });
  }
  result.ground_truth = data.bundle.ground_truth;
  return result;
}

}  // namespace vprkit::cli
