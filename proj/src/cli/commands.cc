#include "vprkit/cli/commands.h"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vprkit/cli/report.h"
#include "vprkit/core/io.h"
#include "vprkit/matching/matching.h"
#include "vprkit/similarity/sequence.h"

namespace vprkit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Config load_with_overrides(const CommonOptions& o) {
  Config cfg = o.config ? Config::load(*o.config) : Config{};
  if (o.seed) cfg.set("run", "seed", std::to_string(*o.seed));
  if (o.out) cfg.set("run", "out", fs::absolute(*o.out).string());
  if (o.mode) cfg.set("matching", "mode", *o.mode);
  if (o.session) cfg.set("dataset", "session", *o.session);
  if (o.threshold) cfg.set("matching", "threshold", *o.threshold);
  return cfg;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

SimilarityMatrix read_similarity(const fs::path& path) {
  DescriptorMatrix m = read_descriptors(path);
  SimilarityMatrix s;
  s.values = std::move(m.values);
  s.tag = MetricTag::kRefined;
  s.validate();
  return s;
}

void write_similarity(const SimilarityMatrix& s, const fs::path& out) {
  write_descriptors(DescriptorMatrix(s.values), out / "similarity.vprd");
  write_pgm(similarity_heatmap(s), out / "similarity.pgm");
}

void write_matches(const MatchMatrix& m, const fs::path& out) {
  write_pairs(true_cells(m.cells), out / "matches.txt");
  write_bool_matrix(m.cells, out / "matches.vprb");
}

std::optional<double> parse_threshold(const std::optional<std::string>& t) {
  if (!t || *t == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(*t, &used);
    if (used == t->size()) return v;
  } catch (const std::exception&) {
  }
  throw ArgumentError("--threshold must be 'auto' or a number, got '" + *t + "'");
}

}  // namespace

RunConfig resolve_config(const CommonOptions& options) {
  return RunConfig::from_config(load_with_overrides(options));
}

void write_pipeline_outputs(const RunConfig& config, const PipelineResult& result,
                            const fs::path& out) {
  fs::create_directories(out);
  write_similarity(result.similarity, out);
  write_matches(result.decisions.matches, out);
  const EvalOptions options{config.matching.mode, config.matching.threshold,
                            config.matching.exclusion, config.evaluation.recall_ks};
  if (result.eval) {
    write_file(out / "pr.csv", pr_curve_csv(result.eval->curve));
    write_file(out / "pr.svg", pr_curve_svg(result.eval->curve, result.eval->auprc,
                                            config.dataset.name));
  }
  write_file(out / "report.json",
             dump(make_report(config.dataset.name, options, result.similarity,
                              result.decisions, result.eval, config.to_json())));
}

void cmd_synth(const CommonOptions& options, std::ostream& log) {
  RunConfig config = resolve_config(options);
  if (config.dataset.kind != DatasetKind::kSynth) {
    throw ArgumentError("synth needs [dataset] kind = synth");
  }
  const LoadedDataset data = load_dataset(config);
  const fs::path& out = config.out;
  OutputLock lock(out);
  const bool single = config.dataset.session == SessionMode::kSingle;
  write_descriptors(*data.bundle.q.descriptors, out / "q.vprd");
  write_place_ids(data.q_place_ids, out / "q_places.txt");
  if (!single) {
    write_descriptors(*data.bundle.db->descriptors, out / "db.vprd");
    write_place_ids(data.db_place_ids, out / "db_places.txt");
  }
  const GroundTruth& gt = *data.bundle.ground_truth;
  write_pairs(true_cells(gt.gt), out / "gt_pairs.txt");
  write_bool_matrix(gt.gt, out / "gt.vprb");
  write_bool_matrix(gt.gt_soft, out / "gt_soft.vprb");

  // Ready-to-run pipeline config over the exported descriptors.
  std::string cfg = "[dataset]\nname = " + config.dataset.name +
                    "\nkind = descriptors\nsession = " + to_string(config.dataset.session) +
                    "\n";
  if (!single) cfg += "db = db.vprd\n";
  cfg += "q = q.vprd\ngt = gt.vprb\ngt_soft = gt_soft.vprb\n\n[run]\nseed = " +
         std::to_string(config.seed) + "\nout = results\n";
  write_file(out / "dataset.cfg", cfg);

  const auto violations = validate_bundle(data.bundle);
  log << "synth: " << (single ? 0 : data.bundle.db->size()) << " db frames, "
      << data.bundle.q.size() << " query frames, dim "
      << data.bundle.q.descriptors->d() << ", " << gt.gt.count()
      << " ground-truth pairs, " << violations.size() << " bundle violations -> "
      << out.string() << "\n";
  for (const auto& v : violations) log << "  violation " << v.code << ": " << v.detail << "\n";
}

void cmd_extract(const CommonOptions& options, std::ostream& log) {
  const RunConfig config = resolve_config(options);
  config.validate();
  const LoadedDataset data = load_dataset(config);
  const ExtractedDescriptors desc = extract_descriptors(config, data.bundle);
  OutputLock lock(config.out);
  write_descriptors(desc.q, config.out / "q.vprd");
  if (desc.db) write_descriptors(*desc.db, config.out / "db.vprd");
  log << "extract: " << (desc.db ? desc.db->n() : 0) << " db and " << desc.q.n()
      << " query descriptors of dimension " << desc.q.d() << " -> "
      << config.out.string() << "\n";
}

void cmd_pipeline(const CommonOptions& options, std::ostream& log) {
  const RunConfig config = resolve_config(options);
  OutputLock lock(config.out);
  const PipelineResult result = run_pipeline(config);
  try {
    write_pipeline_outputs(config, result, config.out);
  } catch (const std::exception& e) {
    throw StageError("output", e.what());
  }
  log << "pipeline: S " << result.similarity.rows() << "x" << result.similarity.cols()
      << ", " << result.decisions.matches.cells.count() << " matches";
  if (result.eval) {
    log << ", AUPRC " << result.eval->auprc << ", P " << result.eval->counts.precision()
        << ", R " << result.eval->counts.recall();
  }
  log << " -> " << config.out.string() << "\n";
}

void cmd_similarity(const SimilarityOptions& options, std::ostream& log) {
  Config cfg = load_with_overrides(options.common);
  if (options.metric) cfg.set("similarity", "metric", *options.metric);
  if (options.seq_length) cfg.set("similarity", "seq_length", std::to_string(*options.seq_length));
  const RunConfig config = RunConfig::from_config(cfg);

  Matrix db;
  Matrix q;
  if (options.q) {
    q = read_descriptors(*options.q).values;
    db = options.db ? read_descriptors(*options.db).values : q;
  } else {
    config.validate();
    const ExtractedDescriptors desc =
        extract_descriptors(config, load_dataset(config).bundle);
    q = desc.q.values;
    db = desc.db ? desc.db->values : q;
  }
  SimilarityMatrix s = similarity::similarity_matrix(db, q, config.similarity.metric);
  if (config.similarity.seq.length > 1) s = similarity::seq_refine(s, config.similarity.seq);
  s = quantize(s);
  OutputLock lock(config.out);
  write_similarity(s, config.out);
  log << "similarity: " << s.rows() << "x" << s.cols() << " (" << to_string(s.tag)
      << ") -> " << config.out.string() << "\n";
}

void cmd_match(const MatchOptions& options, std::ostream& log) {
  const RunConfig config = resolve_config(options.common);
  const SimilarityMatrix s = read_similarity(options.similarity);
  EvalOptions eo{config.matching.mode, config.matching.threshold,
                 options.exclusion ? options.exclusion : config.matching.exclusion, {}};
  const Decisions d = decide(s, eo);
  OutputLock lock(config.out);
  write_matches(d.matches, config.out);
  log << "match: " << to_string(eo.mode) << ", " << d.matches.cells.count() << " matches";
  if (d.threshold) log << " at threshold " << *d.threshold;
  log << " -> " << config.out.string() << "\n";
}

void cmd_eval(const EvalOptionsCli& options, std::ostream& log) {
  const SimilarityMatrix s = read_similarity(options.similarity);
  const auto rows = static_cast<std::size_t>(s.rows());
  const auto cols = static_cast<std::size_t>(s.cols());
  GroundTruth gt;
  if (options.gt.extension() == ".vprb") {
    gt.gt = read_bool_matrix(options.gt);
  } else {
    gt = build_ground_truth(read_pairs(options.gt), rows, cols);
  }
  gt.gt_soft = options.gt_soft ? read_bool_matrix(*options.gt_soft)
                               : dilate(gt.gt, options.soft_radius);
  if (gt.gt.rows() != rows || gt.gt.cols() != cols || !gt.gt.same_shape(gt.gt_soft)) {
    throw DimensionError("ground truth " + std::to_string(gt.gt.rows()) + "x" +
                         std::to_string(gt.gt.cols()) + " does not match S " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }

  const MatchMode mode = match_mode_from_string(options.common.mode.value_or("single-best"));
  const EvalOptions eo{mode, parse_threshold(options.common.threshold), options.exclusion,
                       options.recall_ks};
  const Decisions d = decide(s, eo);
  const EvalSummary summary = evaluate(s, gt, d.matches, eo);

  json cfg = {{"similarity", options.similarity.generic_string()},
              {"gt", options.gt.generic_string()},
              {"gt_soft", options.gt_soft ? json(options.gt_soft->generic_string()) : json(nullptr)},
              {"soft_radius_rows", options.soft_radius.rows},
              {"soft_radius_cols", options.soft_radius.cols},
              {"mode", to_string(mode)},
              {"threshold", eo.threshold ? json(*eo.threshold) : json("auto")},
              {"exclusion", eo.exclusion ? json(*eo.exclusion) : json("none")},
              {"recall_k", options.recall_ks}};
  const fs::path out = options.common.out.value_or("out");
  OutputLock lock(out);
  write_file(out / "report.json", dump(make_report(options.dataset, eo, s, d, summary, cfg)));
  write_file(out / "pr.csv", pr_curve_csv(summary.curve));
  write_file(out / "pr.svg", pr_curve_svg(summary.curve, summary.auprc, options.dataset));
  log << "eval: AUPRC " << summary.auprc << ", " << summary.counts.tp << " TP, "
      << summary.counts.fp << " FP, GTP " << summary.counts.gtp << " -> " << out.string()
      << "\n";
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vprkit: visual place recognition pipeline and evaluation"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string seed_text;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Config file (key = value with [sections])");
    sub->add_option("--seed", common.seed, "Run seed (overrides [run] seed)");
    sub->add_option("--out", common.out, "Output directory");
    sub->add_option("--mode", common.mode, "single-best | multi-match")
        ->check(CLI::IsMember({"single-best", "multi-match"}));
    sub->add_option("--session", common.session, "single | multi")
        ->check(CLI::IsMember({"single", "multi"}));
    sub->add_option("--threshold", common.threshold,
                    "auto | FLOAT. 'auto' picks the Otsu split of a 256-bin "
                    "histogram of S, which separates the same-place and "
                    "different-place modes without parameters");
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_common(synth);
  auto* extract = app.add_subcommand("extract", "Compute descriptors for a dataset");
  add_common(extract);
  auto* pipeline = app.add_subcommand("pipeline", "Run extract, similarity, match and eval");
  add_common(pipeline);

  SimilarityOptions sim;
  auto* similarity = app.add_subcommand("similarity", "Compute the similarity matrix S");
  add_common(similarity);
  similarity->add_option("--db", sim.db, "Database descriptors (VPRD)");
  similarity->add_option("--q", sim.q, "Query descriptors (VPRD)");
  similarity->add_option("--metric", sim.metric, "cosine | neg_euclidean");
  similarity->add_option("--seq-length", sim.seq_length, "Sequence refinement length (odd)");

  MatchOptions match;
  std::size_t match_exclusion = 0;
  auto* match_cmd = app.add_subcommand("match", "Turn S into matching decisions");
  add_common(match_cmd);
  match_cmd->add_option("--similarity", match.similarity, "S file (VPRD)")->required();
  auto* match_excl = match_cmd->add_option("--exclusion", match_exclusion,
                                           "Recent-match exclusion half-width (single-session)");

  EvalOptionsCli ev;
  std::string soft_radius;
  std::size_t eval_exclusion = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate an imported S against ground truth");
  add_common(eval);
  eval->add_option("--similarity", ev.similarity, "S file (VPRD, rows = database)")->required();
  eval->add_option("--gt", ev.gt, "Ground truth: pairs text or VPRB")->required();
  eval->add_option("--gt-soft", ev.gt_soft, "Soft ground truth (VPRB)");
  eval->add_option("--soft-radius", soft_radius, "ROWS,COLS dilation radius for GT_soft");
  eval->add_option("--k", ev.recall_ks, "recall@K depths")->delimiter(',');
  auto* eval_excl = eval->add_option("--exclusion", eval_exclusion,
                                     "Recent-match exclusion half-width (single-session)");
  eval->add_option("--dataset", ev.dataset, "Dataset name for the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      cmd_synth(common, out);
    } else if (extract->parsed()) {
      cmd_extract(common, out);
    } else if (pipeline->parsed()) {
      cmd_pipeline(common, out);
    } else if (similarity->parsed()) {
      sim.common = common;
      cmd_similarity(sim, out);
    } else if (match_cmd->parsed()) {
      match.common = common;
      if (match_excl->count()) match.exclusion = match_exclusion;
      cmd_match(match, out);
    } else if (eval->parsed()) {
      ev.common = common;
      if (eval_excl->count()) ev.exclusion = eval_exclusion;
      if (!soft_radius.empty()) {
        std::istringstream in(soft_radius);
        char comma = 0;
        long r = -1;
        long c = -1;
        if (!(in >> r >> comma >> c) || comma != ',' || r < 0 || c < 0) {
          throw ArgumentError("--soft-radius expects ROWS,COLS");
        }
        ev.soft_radius = {static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
      }
      cmd_eval(ev, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace vprkit::cli
