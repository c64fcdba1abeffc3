#include "nuggetbench/corpus/corpus.hpp"

#include <numeric>

#include "nuggetbench/core/error.hpp"

namespace nb::corpus {

AggregatedAnnotations aggregate_annotations(const AnnotationSet& votes) {
  if (votes.annotator_count == 0) {
    throw ValidationError("dialogue " + votes.dialogue_id + ": annotator count must be positive");
  }
  const double denom = static_cast<double>(votes.annotator_count);
  AggregatedAnnotations out;
  out.per_utterance.reserve(votes.per_utterance_votes.size());
  for (std::size_t u = 0; u < votes.per_utterance_votes.size(); ++u) {
    const auto& counts = votes.per_utterance_votes[u];
    std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (total != votes.annotator_count) {
      throw ValidationError("dialogue " + votes.dialogue_id + " utterance " +
                            std::to_string(u) + ": vote total " + std::to_string(total) +
                            " != annotator count " + std::to_string(votes.annotator_count));
    }
    std::vector<double> mass(kNuggetCount);
    for (std::size_t i = 0; i < kNuggetCount; ++i) {
      mass[i] = static_cast<double>(counts[i]) / denom;
    }
    out.per_utterance.emplace_back(BinDomain::nuggets(), std::move(mass));
  }
  if (votes.per_measure_votes) {
    std::array<ProbabilityBins, kMeasureCount> per_measure;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      const auto& counts = (*votes.per_measure_votes)[m];
      std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
      if (total != votes.annotator_count) {
        throw ValidationError("dialogue " + votes.dialogue_id + " measure " +
                              std::string(kMeasureNames[m]) + ": vote total " +
                              std::to_string(total) + " != annotator count " +
                              std::to_string(votes.annotator_count));
      }
      std::vector<double> mass(kScoreBinCount);
      for (std::size_t i = 0; i < kScoreBinCount; ++i) {
        mass[i] = static_cast<double>(counts[i]) / denom;
      }
      per_measure[m] = ProbabilityBins(BinDomain::scores(), std::move(mass));
    }
    out.per_measure = std::move(per_measure);
  }
  return out;
}

std::vector<Finding> validate_dialogue(const Dialogue& d) {
  std::vector<Finding> findings;
  auto error = [&](std::string msg) {
    findings.push_back({Finding::Severity::Error, d.id, std::move(msg)});
  };
  if (d.utterances.empty()) {
    error("dialogue has no utterances");
    return findings;
  }
  for (const auto& u : d.utterances) {
    if (u.gold_nugget.empty()) {
      error("utterance " + std::to_string(u.index) + ": missing nugget distribution");
      continue;
    }
    if (!(u.gold_nugget.domain() == *BinDomain::nuggets())) {
      error("utterance " + std::to_string(u.index) +
            ": nugget distribution is not over the 7 canonical labels");
      continue;
    }
    for (std::size_t i = 0; i < kNuggetCount; ++i) {
      if (u.gold_nugget.mass(i) > 0.0 && !nugget_valid_for(i, u.speaker)) {
        error("utterance " + std::to_string(u.index) + ": " + speaker_name(u.speaker) +
              " turn has mass " + std::to_string(u.gold_nugget.mass(i)) + " on " +
              u.gold_nugget.domain().label(i));
      }
    }
  }
  if (d.quality) {
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      if ((*d.quality)[m].empty()) {
        error("quality annotations must cover all of A, E, S (missing " +
              std::string(kMeasureNames[m]) + ")");
      }
    }
  }
  return findings;
}

std::vector<Finding> validate_corpus(const Corpus& corpus) {
  std::vector<Finding> findings;
  for (const auto& d : corpus) {
    auto f = validate_dialogue(d);
    findings.insert(findings.end(), f.begin(), f.end());
  }
  return findings;
}

std::size_t utterance_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const auto& d : corpus) n += d.utterances.size();
  return n;
}

}  // namespace nb::corpus
