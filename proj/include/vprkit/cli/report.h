#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "vprkit/cli/pipeline.h"

namespace vprkit::cli {

// Metric report. Undefined metrics are null. The "timestamp" member is the
// only field that differs between identical runs.
nlohmann::json make_report(const std::string& dataset, const EvalOptions& options,
                           const SimilarityMatrix& s, const Decisions& decisions,
                           const std::optional<EvalSummary>& eval,
                           const nlohmann::json& config);

// "theta,precision,recall" with 17 significant digits.
std::string pr_curve_csv(const evaluation::PRCurve& curve);

// Standalone SVG line plot of precision over recall.
std::string pr_curve_svg(const evaluation::PRCurve& curve, double auprc,
                         const std::string& title);

std::string utc_timestamp();

// Holds `<dir>/.vprkit.lock` for the lifetime of the object; throws IoError
// if another run already holds it.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace vprkit::cli
