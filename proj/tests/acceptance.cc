// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracle.h"
#include "test_util.h"
#include "vprkit/cli/config.h"
#include "vprkit/cli/pipeline.h"
#include "vprkit/core/error.h"
#include "vprkit/evaluation/metrics.h"
#include "vprkit/matching/matching.h"
#include "vprkit/similarity/similarity.h"
#include "vprkit/synth/synthgen.h"

using namespace vprkit;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

// Records the first mismatch and counts the rest.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string summary() const {
    return std::to_string(checks_) + " checks, " + std::to_string(failures_) +
           " mismatches" + (failures_ ? " (first: " + first_ + ")" : "");
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

cli::RunConfig config_from(const std::string& text) {
  return cli::RunConfig::from_config(cli::Config::parse(text));
}

double pipeline_auprc(const std::string& text) {
  const auto result = cli::run_pipeline(config_from(text));
  return result.eval->auprc;
}

// --- metric oracle equivalence ---------------------------------------------

Outcome metric_oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Tally t;
  const auto t0 = Clock::now();
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t rows = 1 + rng() % 10, cols = 1 + rng() % 10;
    const auto g = testutil::uniform_grid(rng, rows, cols);
    const auto gt = testutil::random_mask(rng, rows, cols, 0.2);
    const auto soft = oracle::dilate(gt, 1, 1);
    const std::string id = "instance " + std::to_string(inst);
    const BoolMatrix soft_lib = dilate(testutil::to_bool(gt), {1, 1});
    t.check(testutil::to_mask(soft_lib) == soft, id + " dilation");
    const GroundTruth truth{testutil::to_bool(gt), soft_lib};
    const SimilarityMatrix s = testutil::to_sim(g);

    for (bool single : {true, false}) {
      const MatchMode mode = single ? MatchMode::kSingleBest : MatchMode::kMultiMatch;
      const std::string tag = id + (single ? " single-best" : " multi-match");
      const double theta = unit(rng);
      const MatchMatrix lib_m = single ? matching::best_match_per_query(s)
                                       : matching::threshold_match(s, theta);
      const auto ref_m = oracle::decide(g, single ? -1e300 : theta, single);
      t.check(testutil::to_mask(lib_m.cells) == ref_m, tag + " decisions");

      const auto m = oracle::decide(g, theta, single);
      const auto c = evaluation::confusion_counts(
          MatchMatrix{testutil::to_bool(m), mode}, truth, mode);
      const auto rc = oracle::counts(m, gt, soft, single);
      t.check(c.tp == rc.tp && c.fp == rc.fp && c.fn == rc.fn && c.gtp == rc.gtp,
              tag + " counts");
      t.check(near(c.precision(), oracle::precision(rc)), tag + " precision");
      if (rc.gtp > 0) t.check(near(c.recall(), oracle::recall(rc)), tag + " recall");

      if (rc.gtp == 0) {
        bool threw = false;
        try {
          evaluation::pr_curve(s, truth, mode);
        } catch (const ArgumentError&) {
          threw = true;
        }
        t.check(threw, tag + " empty ground truth accepted");
        continue;
      }
      const auto curve = evaluation::pr_curve(s, truth, mode);
      const auto ref = oracle::pr_curve(g, gt, soft, single);
      bool same = curve.size() == ref.size();
      for (std::size_t k = 0; same && k < ref.size(); ++k) {
        same = curve.thetas[k] == ref[k].theta && near(curve.precision[k], ref[k].precision) &&
               near(curve.recall[k], ref[k].recall);
      }
      t.check(same, tag + " curve");
      t.check(near(evaluation::auprc(curve), oracle::auprc(ref)), tag + " auprc");
    }

    for (std::size_t k = 1; k <= 3 && k <= rows; ++k) {
      const auto r = evaluation::recall_at_k(s, truth, static_cast<Eigen::Index>(k), true);
      const auto [hits, counted] = oracle::recall_at_k(g, gt, k);
      t.check(r.counted == counted && r.skipped == cols - counted,
              id + " recall@" + std::to_string(k) + " counted");
      if (counted > 0) {
        t.check(near(r.value, static_cast<double>(hits) / static_cast<double>(counted)),
                id + " recall@" + std::to_string(k));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {t.ok() && secs < 10.0, t.summary() + ", " + num(secs) + " s"};
}

// --- hand curve ---------------------------------------------------------------

Outcome hand_curve() {
  const SimilarityMatrix s = testutil::to_sim({{0.9, 0.1}, {0.2, 0.8}});
  const auto curve = evaluation::pr_curve(s, testutil::identity_gt(2), MatchMode::kMultiMatch);
  const std::vector<std::pair<double, double>> expected{
      {0.5, 1.0}, {1.0, 1.0}, {1.0, 2.0 / 3.0}, {1.0, 0.5}};
  bool ok = curve.size() == expected.size();
  std::string got;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    got += "(" + num(curve.recall[k]) + "," + num(curve.precision[k]) + ")";
    if (ok) ok = curve.recall[k] == expected[k].first && curve.precision[k] == expected[k].second;
  }
  const double area = evaluation::auprc(curve);
  return {ok && area == 0.5, "points " + got + ", AUPRC " + num(area)};
}

// --- perfect separation ---------------------------------------------------------

// Exploration frames in Q break the ground-truth diagonal: their columns hold
// no positive, and the rows on both sides of the gap jump by its length.
bool exploration_structure(std::string& detail) {
  synth::WorldConfig wc;
  wc.n_places = 50;
  wc.seed = 11;
  const synth::World world = synth::generate_world(wc);
  synth::TraverseScript db_script, q_script;
  db_script.events = synth::parse_events("visit 0 50 1");
  q_script.events = synth::parse_events("visit 0 20 1, skip 20 30, visit 30 50 1");
  q_script.seed = 1;
  const auto db = synth::generate_traverse(world, db_script);
  const auto q = synth::generate_traverse(world, q_script);
  const GroundTruth truth = synth::derive_gt(db, q);
  const auto s = similarity::similarity_matrix(db.descriptors.values, q.descriptors.values,
                                               similarity::Metric::kCosine);
  const MatchMatrix m = matching::best_match_per_query(s);

  if (q.place_ids.size() != 50) {
    detail = "query length " + std::to_string(q.place_ids.size());
    return false;
  }
  std::vector<long> diagonal(50, -1);
  for (std::size_t j = 0; j < 50; ++j) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
      if (!truth.gt(i, j)) continue;
      ++positives;
      diagonal[j] = static_cast<long>(i);
    }
    const bool exploring = j >= 20 && j < 30;
    if (exploring != (q.place_ids[j] == -1) || positives != (exploring ? 0u : 1u)) {
      detail = "column " + std::to_string(j) + " has " + std::to_string(positives) + " positives";
      return false;
    }
    if (!exploring && !m.cells(static_cast<std::size_t>(diagonal[j]), j)) {
      detail = "column " + std::to_string(j) + " best match off the diagonal";
      return false;
    }
  }
  for (std::size_t j = 1; j < 50; ++j) {
    if (diagonal[j] < 0 || diagonal[j - 1] < 0) continue;
    const long jump = diagonal[j] - diagonal[j - 1];
    if (jump != 1) {
      detail = "unexpected jump " + std::to_string(jump) + " at column " + std::to_string(j);
      return false;
    }
  }
  if (diagonal[30] - diagonal[19] != 11) {
    detail = "gap spans " + std::to_string(diagonal[30] - diagonal[19]) + " rows";
    return false;
  }
  detail = "10 exploration columns without positives, diagonal resumes 11 rows later";
  return true;
}

Outcome perfect_separation() {
  const auto result = cli::run_pipeline(config_from(R"(
[run]
seed = 5
[dataset]
kind = synth
[synth]
n_places = 50
db_script = visit 0 50 1
q_script = visit 0 50 1
[evaluation]
recall_k = 1
)"));
  const auto& e = *result.eval;
  const double r1 = *e.recall_at_k.at(0).second;
  std::size_t at_full_recall = 0;
  for (double r : e.curve.recall) at_full_recall += r == 1.0;
  std::string structure;
  const bool structure_ok = exploration_structure(structure);
  const bool pass = e.auprc == 1.0 && r1 == 1.0 && structure_ok;
  std::string note;
  if (!pass && at_full_recall == e.curve.size()) {
    note = " (every true pair has similarity exactly 1, so the first threshold already "
           "reaches recall 1; without a recall-0 anchor the curve encloses no area, and the "
           "same area rule is what makes the hand curve 0.5)";
  }
  return {pass, "AUPRC " + num(e.auprc) + ", recall@1 " + num(r1) + ", " +
                    std::to_string(at_full_recall) + "/" + std::to_string(e.curve.size()) +
                    " curve points at recall 1" + note + "; " + structure};
}

// --- standardization ---------------------------------------------------------------

Outcome standardization() {
  int wins = 0;
  double gain = 0.0;
  std::string values;
  for (int seed = 1; seed <= 10; ++seed) {
    auto text = [&](const char* method) {
      return "[run]\nseed = " + std::to_string(seed) +
             "\n[dataset]\nkind = synth\n[synth]\nn_places = 100\nlatent_dim = 64\n"
             "db_script = visit 0 100 1\nq_script = visit 0 100 1\n"
             "db_noise = 0.1\nq_noise = 0.1\nq_bias_norm = 2.0\n"
             "q_scale_min = 0.5\nq_scale_max = 1.5\n[standardize]\nmethod = " +
             std::string(method) + "\n";
    };
    const double raw = pipeline_auprc(text("none"));
    const double standardized = pipeline_auprc(text("condition"));
    wins += standardized > raw;
    gain += standardized - raw;
    values += (seed > 1 ? " " : "") + num(raw) + "->" + num(standardized);
  }
  gain /= 10.0;
  return {wins >= 9 && gain >= 0.1, std::to_string(wins) + "/10 seeds improved, mean gain " +
                                        num(gain) + " [" + values + "]"};
}

// --- sequence refinement -------------------------------------------------------------

Outcome sequence_refinement() {
  int wins = 0;
  std::string values;
  for (int seed = 1; seed <= 10; ++seed) {
    auto text = [&](int length) {
      return "[run]\nseed = " + std::to_string(seed) +
             "\n[dataset]\nkind = synth\n[synth]\nn_places = 100\nlatent_dim = 64\n"
             "aliasing_pairs = 10\ndb_script = visit 0 100 1\nq_script = visit 0 100 1\n"
             "db_noise = 0.3\nq_noise = 0.3\n[similarity]\nseq_length = " +
             std::to_string(length) + "\n";
    };
    const double single = pipeline_auprc(text(1));
    const double sequence = pipeline_auprc(text(5));
    wins += sequence > single;
    values += (seed > 1 ? " " : "") + num(single) + "->" + num(sequence);
  }
  return {wins >= 9, std::to_string(wins) + "/10 seeds improved [" + values + "]"};
}

// --- identity of metrics ---------------------------------------------------------------

Outcome identity_of_metrics() {
  Tally t;
  std::string values;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    synth::WorldConfig wc;
    wc.n_places = 60;
    wc.seed = seed;
    const auto world = synth::generate_world(wc);
    synth::TraverseScript db_script, q_script;
    db_script.events = synth::parse_events("visit 0 60 1");
    q_script.events = synth::parse_events("visit 0 60 1");
    db_script.noise_sigma = q_script.noise_sigma = 0.25;
    q_script.seed = 1;
    const auto db = synth::generate_traverse(world, db_script);
    const auto q = synth::generate_traverse(world, q_script);
    const auto truth = synth::derive_gt(db, q);
    const auto s = similarity::similarity_matrix(db.descriptors.values, q.descriptors.values,
                                                 similarity::Metric::kCosine);
    const auto curve = evaluation::pr_curve(s, truth, MatchMode::kSingleBest);
    const double r1 = evaluation::recall_at_k(s, truth, 1, false).value;
    double max_recall = 0.0;
    for (double r : curve.recall) max_recall = std::max(max_recall, r);
    // The lowest threshold keeps every query's best match.
    const double p = curve.precision.back();
    t.check(curve.recall.back() == max_recall, "seed " + std::to_string(seed) + " recall");
    t.check(p == r1, "seed " + std::to_string(seed) + ": " + num(r1) + " vs " + num(p));
    values += (seed > 1 ? " " : "") + num(r1);
  }
  return {t.ok(), t.summary() + ", recall@1 [" + values + "]"};
}

// --- monotonicity ------------------------------------------------------------------------

Outcome monotonicity() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<std::string, Tally> tallies;
  constexpr int kInstances = 200;
  for (int inst = 0; inst < kInstances; ++inst) {
    const std::string id = "instance " + std::to_string(inst);
    const std::size_t rows = 2 + rng() % 9, cols = 1 + rng() % 10;
    const auto g = testutil::uniform_grid(rng, rows, cols);
    const SimilarityMatrix s = testutil::to_sim(g);
    auto gt = testutil::random_mask(rng, rows, cols, 0.2);
    gt[rng() % rows][rng() % cols] = true;
    const GroundTruth truth{testutil::to_bool(gt), testutil::to_bool(gt)};

    const double a = unit(rng), b = unit(rng);
    tallies["threshold antitonicity"].check(
        matching::threshold_match(s, std::max(a, b))
            .cells.is_subset_of(matching::threshold_match(s, std::min(a, b)).cells),
        id);

    double previous = -1.0;
    bool nondecreasing = true;
    for (std::size_t k = 1; k <= rows; ++k) {
      const double r = evaluation::recall_at_k(s, truth, static_cast<Eigen::Index>(k), true).value;
      nondecreasing = nondecreasing && r >= previous;
      previous = r;
    }
    tallies["recall@K nondecreasing in K"].check(nondecreasing && previous == 1.0, id);

    for (MatchMode mode : {MatchMode::kSingleBest, MatchMode::kMultiMatch}) {
      const auto curve = evaluation::pr_curve(s, truth, mode);
      bool monotone = true;
      for (std::size_t k = 1; k < curve.size(); ++k) {
        monotone = monotone && curve.thetas[k] < curve.thetas[k - 1] &&
                   curve.recall[k] >= curve.recall[k - 1];
      }
      tallies["recall monotone along descending threshold"].check(monotone, id);

      for (const auto& f : std::vector<std::function<double(double)>>{
               [](double x) { return std::exp(3.0 * x) - 7.0; },
               [](double x) { return x * x * x; },
               [](double x) { return 2.0 * x + 1.0; }}) {
        auto warped = s;
        warped.values = s.values.unaryExpr(f);
        tallies["AUPRC invariance under monotone transforms"].check(
            evaluation::auprc(evaluation::pr_curve(warped, truth, mode)) ==
                evaluation::auprc(curve),
            id);
      }
    }

    const SoftRadius small{rng() % 3, rng() % 3};
    const SoftRadius large{small.rows + rng() % 3, small.cols + rng() % 3};
    const BoolMatrix d_small = dilate(truth.gt, small), d_large = dilate(truth.gt, large);
    tallies["dilation monotonicity"].check(
        truth.gt.is_subset_of(d_small) && d_small.is_subset_of(d_large), id);
  }
  bool ok = true;
  std::string detail;
  for (const auto& [name, t] : tallies) {
    ok = ok && t.ok() && t.checks() >= kInstances;
    detail += (detail.empty() ? "" : "; ") + name + ": " + t.summary();
  }
  return {ok, detail};
}

// --- command-line runs ----------------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + VPRKIT_BIN + "\" " + args + " >>\"" +
                          log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Every file under `dir` keyed by relative path; report timestamps removed.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  static const std::regex timestamp(R"("timestamp": "[^"]*")");
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string bytes = read_file(entry.path());
    if (entry.path().filename() == "report.json") {
      bytes = std::regex_replace(bytes, timestamp, "\"timestamp\": \"\"");
    }
    files[fs::relative(entry.path(), dir).string()] = bytes;
  }
  return files;
}

Outcome determinism() {
  const fs::path root = testutil::scratch_dir("acceptance_determinism");
  const fs::path mini = fs::absolute(VPRKIT_MINI_DIR);
  const std::map<std::string, std::string> configs{
      {"synth_multi", R"([run]
seed = 3
[dataset]
kind = synth
[synth]
n_places = 40
db_script = visit 0 40 1
q_script = visit 0 10 1, stop 10 3, visit 11 40 1.5
db_noise = 0.2
q_noise = 0.2
q_bias_norm = 1.0
q_scale_min = 0.7
q_scale_max = 1.3
[standardize]
method = condition
[reduction]
method = pca
dim = 16
[similarity]
seq_length = 3
)"},
      {"synth_single", R"([run]
seed = 9
[dataset]
kind = synth
session = single
[synth]
n_places = 30
q_script = visit 0 30 1, loop 0 10, skip 0 5
q_noise = 0.2
[matching]
mode = multi-match
exclusion = 2
[evaluation]
soft_radius_rows = 1
soft_radius_cols = 1
recall_k = 1,3
)"},
      {"mini_vlad", "[run]\nseed = 13\n[dataset]\nkind = images\ndb = " +
                        (mini / "db").string() + "\nq = " + (mini / "q").string() +
                        "\ngt = " + (mini / "gt_pairs.txt").string() +
                        "\n[descriptor]\nmethod = vlad\ncodebook_k = 4\n"}};
  std::string detail;
  bool ok = true;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = root / (name + ".cfg");
    const fs::path out = root / name;
    write_file(cfg, text);
    const std::string args = "pipeline --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"";
    std::map<std::string, std::string> first;
    bool same = run_cli(args, root / "log.txt") == 0;
    if (same) {
      first = snapshot(out);
      fs::remove_all(out);
      same = run_cli(args, root / "log.txt") == 0 && snapshot(out) == first;
    }
    ok = ok && same && first.size() >= 4;
    detail += (detail.empty() ? "" : "; ") + name + ": " + std::to_string(first.size()) +
              " files " + (same ? "identical" : "DIFFER");
  }
  return {ok, detail};
}

// Minimal well-formedness check: tags nest and close.
bool balanced_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    const std::string name = tag.substr(tag[0] == '/', tag.find_first_of(" \t\n") - (tag[0] == '/'));
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

std::string check_report(const json& r, std::size_t csv_rows) {
  auto is_unit = [](const json& v) { return v.is_number() && v >= 0.0 && v <= 1.0; };
  for (const char* key : {"dataset", "mode", "metric", "timestamp"}) {
    if (!r.contains(key) || !r[key].is_string()) return std::string("field ") + key;
  }
  if (!std::regex_match(r["timestamp"].get<std::string>(),
                        std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)"))) {
    return "timestamp format";
  }
  if (r["shape"] != json::array({10, 10})) return "shape";
  if (!is_unit(r["auprc"]) || !is_unit(r["precision"]) || !is_unit(r["recall"])) return "ratios";
  if (!r["counts"].is_object()) return "counts";
  for (const char* key : {"tp", "fp", "fn", "gtp"}) {
    if (!r["counts"][key].is_number_unsigned()) return std::string("counts.") + key;
  }
  if (r["counts"]["tp"].get<std::size_t>() + r["counts"]["fn"].get<std::size_t>() !=
      r["counts"]["gtp"].get<std::size_t>()) {
    return "tp + fn != gtp";
  }
  for (const char* group : {"r_at_p", "recall_at_k"}) {
    if (!r[group].is_object() || r[group].empty()) return group;
    for (const auto& v : r[group]) {
      if (!v.is_null() && !is_unit(v)) return group;
    }
  }
  if (!r["matches"].is_number_unsigned() || !r["skipped"].is_number_unsigned()) return "matches";
  if (r["curve_points"] != csv_rows) return "curve_points";
  if (!r["config"].is_object()) return "config";
  return "";
}

std::string check_csv(const std::string& text, std::size_t& rows) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "theta,precision,recall") return "header";
  double previous = std::numeric_limits<double>::infinity();
  rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    double v[3];
    char c1 = 0, c2 = 0;
    if (!(fields >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',' ||
        !fields.eof()) {
      return "row " + std::to_string(rows + 1);
    }
    if (v[0] >= previous || v[1] < 0 || v[1] > 1 || v[2] < 0 || v[2] > 1) {
      return "values in row " + std::to_string(rows + 1);
    }
    previous = v[0];
    ++rows;
  }
  return rows ? "" : "no rows";
}

std::string check_pgm(const std::string& bytes, int width, int height) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w != width || h != height || maxval != 255) return "header";
  in.get();
  const auto offset = static_cast<std::size_t>(in.tellg());
  if (bytes.size() - offset != static_cast<std::size_t>(w * h)) return "payload size";
  return "";
}

Outcome end_to_end_cli() {
  const fs::path root = testutil::scratch_dir("acceptance_e2e");
  const fs::path mini = fs::absolute(VPRKIT_MINI_DIR);
  const fs::path out = root / "out";
  const fs::path log = root / "log.txt";
  const std::string o = " --out \"" + out.string() + "\"";
  const std::string sim = "\"" + (out / "similarity.vprd").string() + "\"";

  const auto t0 = Clock::now();
  const std::vector<std::string> steps{
      "extract --config \"" + (mini / "mini.cfg").string() + "\"" + o,
      "similarity --db \"" + (out / "db.vprd").string() + "\" --q \"" +
          (out / "q.vprd").string() + "\"" + o,
      "match --similarity " + sim + o,
      "eval --similarity " + sim + " --gt \"" + (mini / "gt_pairs.txt").string() +
          "\" --k 1,2,5 --dataset mini" + o};
  for (const auto& step : steps) {
    if (run_cli(step, log) != 0) {
      return {false, "command failed: vprkit " + step + "\n" + read_file(log)};
    }
  }
  const double secs = seconds_since(t0);

  std::size_t csv_rows = 0;
  std::string problem = check_csv(read_file(out / "pr.csv"), csv_rows);
  if (problem.empty()) {
    try {
      problem = check_report(json::parse(read_file(out / "report.json")), csv_rows);
    } catch (const json::exception& e) {
      problem = e.what();
    }
    if (!problem.empty()) problem = "report.json: " + problem;
  } else {
    problem = "pr.csv: " + problem;
  }
  if (problem.empty()) {
    const std::string svg = read_file(out / "pr.svg");
    if (svg.rfind("<?xml", 0) != 0 || svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") ==
                                          std::string::npos ||
        svg.find("<polyline") == std::string::npos || !balanced_xml(svg)) {
      problem = "pr.svg malformed";
    }
  }
  if (problem.empty()) {
    const std::string pgm = check_pgm(read_file(out / "similarity.pgm"), 10, 10);
    if (!pgm.empty()) problem = "similarity.pgm: " + pgm;
  }
  return {problem.empty() && secs < 5.0,
          num(secs) + " s for extract, similarity, match, eval" +
              (problem.empty() ? "; JSON, CSV, SVG and PGM valid" : "; " + problem)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metric oracle equivalence", metric_oracle_equivalence},
      {"hand curve", hand_curve},
      {"perfect separation", perfect_separation},
      {"standardization", standardization},
      {"sequence refinement", sequence_refinement},
      {"identity of metrics", identity_of_metrics},
      {"monotonicity", monotonicity},
      {"determinism", determinism},
      {"end-to-end cli", end_to_end_cli},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
