#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nuggetbench/core/bins.hpp"
#include "nuggetbench/core/labels.hpp"

namespace nb::corpus {

struct Utterance {
  std::size_t index = 0;
  Speaker speaker = Speaker::Customer;
  std::vector<std::string> tokens;
  // Over all 7 canonical nuggets, structural zeros for the other role.
  ProbabilityBins gold_nugget;

  bool operator==(const Utterance&) const = default;
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> utterances;
  // A, E, S in that order; all present or all absent.
  std::optional<std::array<ProbabilityBins, kMeasureCount>> quality;

  bool operator==(const Dialogue&) const = default;
};

using Corpus = std::vector<Dialogue>;

// Raw annotator votes for one dialogue.
struct AnnotationSet {
  std::string dialogue_id;
  std::size_t annotator_count = 0;
  // One 7-slot count vector per utterance, canonical nugget order.
  std::vector<std::array<std::size_t, kNuggetCount>> per_utterance_votes;
  // Counts per score bin for A, E, S; absent when the dialogue carries no
  // quality annotations.
  std::optional<std::array<std::array<std::size_t, kScoreBinCount>, kMeasureCount>>
      per_measure_votes;
};

struct AggregatedAnnotations {
  std::vector<ProbabilityBins> per_utterance;  // over the 7 nuggets
  std::optional<std::array<ProbabilityBins, kMeasureCount>> per_measure;
};

// Vote fractions: every mass is count / annotator_count exactly.
// Throws ValidationError when a vote total disagrees with annotator_count,
// naming the utterance or measure.
AggregatedAnnotations aggregate_annotations(const AnnotationSet& votes);

struct Finding {
  enum class Severity { Warning, Error } severity = Severity::Error;
  std::string dialogue_id;
  std::string message;
};

// Structural checks on an already-parsed dialogue: non-empty turn list,
// role-valid nugget mass, all-or-none quality measures.
std::vector<Finding> validate_dialogue(const Dialogue& d);

std::vector<Finding> validate_corpus(const Corpus& corpus);

// Total utterances across the corpus.
std::size_t utterance_count(const Corpus& corpus);

}  // namespace nb::corpus
