#include "vprkit/cli/report.h"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "vprkit/core/error.h"

namespace vprkit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

json make_report(const std::string& dataset, const EvalOptions& options,
                 const SimilarityMatrix& s, const Decisions& decisions,
                 const std::optional<EvalSummary>& eval, const json& config) {
  json r;
  r["dataset"] = dataset;
  r["mode"] = to_string(options.mode);
  r["shape"] = {s.rows(), s.cols()};
  r["metric"] = to_string(s.tag);
  r["threshold"] = optional_number(decisions.threshold);
  r["matches"] = decisions.matches.cells.count();
  if (eval) {
    r["auprc"] = eval->auprc;
    r["r_at_p"] = {{"1.0", optional_number(eval->r_at_100p)},
                   {"0.99", optional_number(eval->r_at_99p)},
                   {"0.95", optional_number(eval->r_at_95p)}};
    json rk = json::object();
    for (const auto& [k, v] : eval->recall_at_k) rk[std::to_string(k)] = optional_number(v);
    r["recall_at_k"] = rk;
    r["counts"] = {{"tp", eval->counts.tp},
                   {"fp", eval->counts.fp},
                   {"fn", eval->counts.fn},
                   {"gtp", eval->counts.gtp}};
    r["precision"] = eval->counts.precision();
    r["recall"] = eval->counts.recall();
    r["skipped"] = eval->skipped;
    r["curve_points"] = eval->curve.size();
  } else {
    r["auprc"] = nullptr;
    r["r_at_p"] = {{"1.0", nullptr}, {"0.99", nullptr}, {"0.95", nullptr}};
    r["recall_at_k"] = json::object();
    r["counts"] = nullptr;
    r["skipped"] = nullptr;
  }
  r["config"] = config;
  r["timestamp"] = utc_timestamp();
  return r;
}

std::string pr_curve_csv(const evaluation::PRCurve& curve) {
  std::string out = "theta,precision,recall\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    out += fmt("%.17g", curve.thetas[k]) + "," + fmt("%.17g", curve.precision[k]) +
           "," + fmt("%.17g", curve.recall[k]) + "\n";
  }
  return out;
}

std::string pr_curve_svg(const evaluation::PRCurve& curve, double auprc,
                         const std::string& title) {
  constexpr double kWidth = 480;
  constexpr double kHeight = 420;
  constexpr double kLeft = 60;
  constexpr double kTop = 40;
  constexpr double kPlot = 340;
  auto x_of = [&](double recall) { return kLeft + recall * kPlot; };
  auto y_of = [&](double precision) { return kTop + (1.0 - precision) * kPlot; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) +
         "\" height=\"" + fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " +
         fmt("%.0f", kWidth) + " " + fmt("%.0f", kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt("%.0f", kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" +
         xml_escape(title) + " (AUPRC " + fmt("%.3f", auprc) + ")</text>\n";
  // Grid and ticks.
  for (int t = 0; t <= 10; ++t) {
    const double v = t / 10.0;
    const std::string gx = fmt("%.2f", x_of(v));
    const std::string gy = fmt("%.2f", y_of(v));
    svg += "<line x1=\"" + gx + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + gx +
           "\" y2=\"" + fmt("%.2f", kTop + kPlot) + "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + gy + "\" x2=\"" +
           fmt("%.2f", kLeft + kPlot) + "\" y2=\"" + gy + "\" stroke=\"#e0e0e0\"/>\n";
    if (t % 2 == 0) {
      svg += "<text x=\"" + gx + "\" y=\"" + fmt("%.2f", kTop + kPlot + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
             fmt("%.1f", v) + "</text>\n";
      svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", y_of(v) + 3) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
             fmt("%.1f", v) + "</text>\n";
    }
  }
  svg += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) +
         "\" width=\"" + fmt("%.2f", kPlot) + "\" height=\"" + fmt("%.2f", kPlot) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt("%.2f", kLeft + kPlot / 2) + "\" y=\"" +
         fmt("%.2f", kTop + kPlot + 36) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Recall</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt("%.2f", kTop + kPlot / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + fmt("%.2f", kTop + kPlot / 2) +
         ")\">Precision</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (k) svg += " ";
    svg += fmt("%.3f", x_of(curve.recall[k])) + "," + fmt("%.3f", y_of(curve.precision[k]));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".vprkit.lock") {
  fs::create_directories(dir);
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    throw IoError("output directory '" + dir.string() +
                  "' is locked by another run (" + path_.string() + ")");
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

}  // namespace vprkit::cli
