#pragma once

#include <map>
#include <string>

#include "nuggetbench/corpus/corpus.hpp"
#include "nuggetbench/metrics/metrics.hpp"

namespace nb::corpus {

enum class CorpusFormat {
  Aggregated,  // real-valued distributions
  RawVotes,    // integer vote counts plus "annotators"
  Auto,        // raw-votes when a dialogue carries "annotators"
};

struct ParseResult {
  Corpus dialogues;
  std::vector<Finding> findings;
};

// Permissive parse: collects findings instead of throwing on domain
// violations (malformed JSON still throws ParseError). Aggregated
// distributions must sum to within [0.995, 1.005] before renormalization;
// raw votes go through aggregate_annotations.
ParseResult parse_corpus_lenient(const std::string& path, CorpusFormat format = CorpusFormat::Auto);

// Strict parse: throws ValidationError on the first error-severity finding.
Corpus parse_corpus(const std::string& path, CorpusFormat format = CorpusFormat::Auto);

std::string serialize_corpus(const Corpus& corpus);
void write_corpus(const std::string& path, const Corpus& corpus);

// Prediction files mirror the corpus format with "nugget"/"quality"
// replaced by predicted distributions; "tokens" may be omitted. Role
// constraints are not enforced (an unmasked model may emit off-role mass).
struct PredictedDialogue {
  std::string id;
  std::vector<Speaker> speakers;
  std::vector<ProbabilityBins> nuggets;  // empty slots when absent
  std::optional<std::array<ProbabilityBins, kMeasureCount>> quality;
};

struct PredictionSet {
  // Keyed by dialogue id; insertion order preserved separately for output.
  std::map<std::string, PredictedDialogue> by_id;
  std::vector<std::string> order;

  const PredictedDialogue* find(const std::string& id) const {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : &it->second;
  }
  void insert(PredictedDialogue d);
};

PredictionSet parse_predictions(const std::string& path);
std::string serialize_predictions(const PredictionSet& preds);
void write_predictions(const std::string& path, const PredictionSet& preds);

}  // namespace nb::corpus
