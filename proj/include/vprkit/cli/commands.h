#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vprkit/cli/pipeline.h"

namespace vprkit::cli {

// Flags shared by every subcommand. Set values override the config file.
struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> mode;
  std::optional<std::string> session;
  std::optional<std::string> threshold;
};

// Loads --config (if any) and applies the flag overrides.
RunConfig resolve_config(const CommonOptions& options);

// Writes similarity.vprd, similarity.pgm, matches.txt, matches.vprb,
// report.json and, with evaluation, pr.csv and pr.svg.
void write_pipeline_outputs(const RunConfig& config, const PipelineResult& result,
                            const std::filesystem::path& out);

void cmd_synth(const CommonOptions& options, std::ostream& log);
void cmd_extract(const CommonOptions& options, std::ostream& log);
void cmd_pipeline(const CommonOptions& options, std::ostream& log);

struct SimilarityOptions {
  CommonOptions common;
  std::optional<std::filesystem::path> db;
  std::optional<std::filesystem::path> q;
  std::optional<std::string> metric;
  std::optional<int> seq_length;
};
void cmd_similarity(const SimilarityOptions& options, std::ostream& log);

struct MatchOptions {
  CommonOptions common;
  std::filesystem::path similarity;
  std::optional<std::size_t> exclusion;
};
void cmd_match(const MatchOptions& options, std::ostream& log);

struct EvalOptionsCli {
  CommonOptions common;
  std::filesystem::path similarity;
  std::filesystem::path gt;
  std::optional<std::filesystem::path> gt_soft;
  SoftRadius soft_radius;
  std::vector<long> recall_ks{1, 5, 10};
  std::optional<std::size_t> exclusion;
  std::string dataset = "imported";
};
void cmd_eval(const EvalOptionsCli& options, std::ostream& log);

// Entry point of the `vprkit` executable. Returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace vprkit::cli
