#include "nuggetbench/report/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace nb::report {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json manifest_json(const RunManifest& m) {
  return ordered_json::parse(m.to_json_fragment());
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string dq_report_json(const RunManifest& manifest, const metrics::RunScoreDQ& run) {
  ordered_json j;
  j["manifest"] = manifest_json(manifest);
  ordered_json dq;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    dq[std::string(kMeasureNames[m])] = {{"nmd", run.mean_nmd[m]},
                                         {"rsnod", run.mean_rsnod[m]}};
  }
  j["dq"] = std::move(dq);
  ordered_json per = ordered_json::array();
  for (const auto& d : run.per_dialogue) {
    ordered_json row;
    row["id"] = d.dialogue_id;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      row[std::string(kMeasureNames[m])] = {{"nmd", d.nmd[m]}, {"rsnod", d.rsnod[m]}};
    }
    per.push_back(std::move(row));
  }
  j["per_dialogue"] = std::move(per);
  return j.dump(2) + "\n";
}

std::string dq_report_csv(const metrics::RunScoreDQ& run) {
  std::ostringstream out;
  out << "dialogue_id,measure,nmd,rsnod\n";
  for (const auto& d : run.per_dialogue) {
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      out << d.dialogue_id << ',' << kMeasureNames[m] << ',' << num(d.nmd[m]) << ','
          << num(d.rsnod[m]) << '\n';
    }
  }
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    out << "__mean__," << kMeasureNames[m] << ',' << num(run.mean_nmd[m]) << ','
        << num(run.mean_rsnod[m]) << '\n';
  }
  return out.str();
}

std::string nd_report_json(const RunManifest& manifest, const metrics::RunScoreND& run) {
  ordered_json j;
  j["manifest"] = manifest_json(manifest);
  j["nd"] = {{"jsd", run.mean_jsd}, {"rnss", run.mean_rnss}};
  ordered_json per = ordered_json::array();
  for (const auto& u : run.per_utterance) {
    per.push_back({{"id", u.dialogue_id},
                   {"index", u.utterance_index},
                   {"jsd", u.jsd},
                   {"rnss", u.rnss}});
  }
  j["per_utterance"] = std::move(per);
  return j.dump(2) + "\n";
}

std::string nd_report_csv(const metrics::RunScoreND& run) {
  std::ostringstream out;
  out << "dialogue_id,utterance_index,jsd,rnss\n";
  for (const auto& u : run.per_utterance) {
    out << u.dialogue_id << ',' << u.utterance_index << ',' << num(u.jsd) << ','
        << num(u.rnss) << '\n';
  }
  out << "__mean__,," << num(run.mean_jsd) << ',' << num(run.mean_rnss) << '\n';
  return out.str();
}

std::string classical_report_json(const RunManifest& manifest, const ClassicalReport& report) {
  ordered_json j;
  j["manifest"] = manifest_json(manifest);
  if (report.has_nd) {
    ordered_json labels = ordered_json::array();
    for (auto name : kNuggetNames) labels.push_back(std::string(name));
    ordered_json counts = ordered_json::array();
    for (std::size_t i = 0; i < kNuggetCount; ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t c = 0; c < kNuggetCount; ++c) row.push_back(report.confusion.counts[i][c]);
      counts.push_back(std::move(row));
    }
    j["confusion"] = {{"labels", labels},
                      {"rows_are_predictions", true},
                      {"counts", std::move(counts)}};
    ordered_json per_label;
    for (std::size_t i = 0; i < kNuggetCount; ++i) {
      per_label[std::string(kNuggetNames[i])] = {{"precision", report.prf.precision[i]},
                                                 {"recall", report.prf.recall[i]},
                                                 {"f1", report.prf.f1[i]}};
    }
    j["prf"] = {{"per_label", std::move(per_label)},
                {"macro",
                 {{"precision", report.prf.macro_precision},
                  {"recall", report.prf.macro_recall},
                  {"f1", report.prf.macro_f1}}},
                {"accuracy", report.prf.accuracy}};
    j["multi_gold_accuracy"] = report.multi_gold_accuracy;
    ordered_json gaps = ordered_json::array();
    for (const auto& rec : report.tie_gap) {
      gaps.push_back({{"pair",
                       {std::string(kNuggetNames[rec.lo]), std::string(kNuggetNames[rec.hi])}},
                      {"mean_gap", rec.mean_gap},
                      {"count", rec.count},
                      {"fraction", rec.fraction}});
    }
    j["tie_gap"] = std::move(gaps);
    j["expansion"] = {{"dialogues_before", report.expansion.dialogues_before},
                      {"utterances_before", report.expansion.utterances_before},
                      {"dialogues_after", report.expansion.dialogues_after},
                      {"utterances_after", report.expansion.utterances_after}};
  }
  if (report.has_dq) {
    ordered_json acc;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      acc[std::string(kMeasureNames[m])] = report.dq_accuracy[m];
    }
    j["dq_accuracy"] = std::move(acc);
  }
  return j.dump(2) + "\n";
}

std::string confusion_csv(const classical::ConfusionMatrix& m) {
  std::ostringstream out;
  out << "pred\\true";
  for (auto name : kNuggetNames) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    out << kNuggetNames[i];
    for (std::size_t c = 0; c < kNuggetCount; ++c) out << ',' << m.counts[i][c];
    out << '\n';
  }
  return out.str();
}

std::string prf_csv(const classical::PRFTable& t) {
  std::ostringstream out;
  out << "nugget,precision,recall,f1\n";
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    out << kNuggetNames[i] << ',' << num(t.precision[i]) << ',' << num(t.recall[i]) << ','
        << num(t.f1[i]) << '\n';
  }
  out << "__macro__," << num(t.macro_precision) << ',' << num(t.macro_recall) << ','
      << num(t.macro_f1) << '\n';
  out << "__accuracy__," << num(t.accuracy) << ",,\n";
  return out.str();
}

std::string tie_gap_csv(const std::vector<classical::TieGapRecord>& table) {
  std::ostringstream out;
  out << "pair,avg_prob_diff,count,percentage\n";
  char buf[32];
  for (const auto& rec : table) {
    std::snprintf(buf, sizeof(buf), "%.1f%%", rec.fraction * 100.0);
    out << '"' << kNuggetNames[rec.lo] << ", " << kNuggetNames[rec.hi] << "\"," << num(rec.mean_gap)
        << ',' << rec.count << ',' << buf << '\n';
  }
  return out.str();
}

std::string dq_accuracy_csv(const std::array<double, kMeasureCount>& accuracy) {
  std::ostringstream out;
  out << "measure,accuracy\n";
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    out << kMeasureNames[m] << ',' << num(accuracy[m]) << '\n';
  }
  return out.str();
}

std::string expansion_csv(const classical::ExpansionStatistics& stats) {
  std::ostringstream out;
  out << "quantity,original,after_preprocessing\n";
  out << "dialogues," << stats.dialogues_before << ',' << stats.dialogues_after << '\n';
  out << "utterances," << stats.utterances_before << ',' << stats.utterances_after << '\n';
  return out.str();
}

std::string findings_report(const std::vector<corpus::Finding>& findings) {
  std::ostringstream out;
  for (const auto& f : findings) {
    out << (f.severity == corpus::Finding::Severity::Error ? "ERROR" : "WARN") << '\t'
        << f.dialogue_id << '\t' << f.message << '\n';
  }
  return out.str();
}

}  // namespace nb::report
