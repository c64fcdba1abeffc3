#pragma once

#include "nuggetbench/classical/classical.hpp"
#include "nuggetbench/metrics/metrics.hpp"
#include "nuggetbench/report/manifest.hpp"

namespace nb::report {

// Evaluation reports: a JSON object with the manifest, run aggregates, and
// per-item detail, plus a CSV flattening of the same numbers.
std::string dq_report_json(const RunManifest& manifest, const metrics::RunScoreDQ& run);
std::string dq_report_csv(const metrics::RunScoreDQ& run);

std::string nd_report_json(const RunManifest& manifest, const metrics::RunScoreND& run);
std::string nd_report_csv(const metrics::RunScoreND& run);

struct ClassicalReport {
  classical::ConfusionMatrix confusion;
  classical::PRFTable prf;
  double multi_gold_accuracy = 0.0;
  std::vector<classical::TieGapRecord> tie_gap;
  classical::ExpansionStatistics expansion;
  bool has_nd = false;
  std::array<double, kMeasureCount> dq_accuracy{};
  bool has_dq = false;
};

std::string classical_report_json(const RunManifest& manifest, const ClassicalReport& report);
std::string confusion_csv(const classical::ConfusionMatrix& m);
std::string prf_csv(const classical::PRFTable& t);
std::string tie_gap_csv(const std::vector<classical::TieGapRecord>& table);
std::string dq_accuracy_csv(const std::array<double, kMeasureCount>& accuracy);
std::string expansion_csv(const classical::ExpansionStatistics& stats);

std::string findings_report(const std::vector<corpus::Finding>& findings);

}  // namespace nb::report
