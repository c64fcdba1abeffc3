#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nuggetbench/corpus/corpus.hpp"
#include "nuggetbench/corpus/json_io.hpp"

namespace nb::classical {

// Hard label sequences derived from tied-argmax gold distributions: the
// Cartesian product over per-utterance argmax sets. Alternatives at each
// position iterate in canonical label order, earlier positions varying
// fastest.
struct OneHotExpansion {
  std::string source_dialogue;
  std::vector<std::vector<std::size_t>> sequences;  // nugget indices per utterance
};

// Expansion factors above this are refused as pathological synthetic input.
inline constexpr std::size_t kExpansionCap = 64;

OneHotExpansion expand_onehot(const corpus::Dialogue& d, double tie_tolerance = 1e-6);

struct ExpansionStatistics {
  std::size_t dialogues_before = 0;
  std::size_t utterances_before = 0;
  std::size_t dialogues_after = 0;
  std::size_t utterances_after = 0;
};

ExpansionStatistics expansion_statistics(const corpus::Corpus& corpus,
                                         double tie_tolerance = 1e-6);

// Fraction of positions where the predicted label falls inside the gold
// tied-argmax set.
double multi_gold_accuracy(const std::vector<ArgmaxSet>& gold_sets,
                           const std::vector<std::size_t>& predicted);

// rows = predictions, columns = true labels.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNuggetCount>, kNuggetCount> counts{};

  std::size_t total() const;
  std::size_t trace() const;
};

// Tie handling: a prediction inside the gold set credits the diagonal at
// the predicted label; otherwise the count goes to (predicted, canonical
// first gold label).
ConfusionMatrix confusion_matrix(const std::vector<ArgmaxSet>& gold_sets,
                                 const std::vector<std::size_t>& predicted);

struct PRFTable {
  std::array<double, kNuggetCount> precision{};
  std::array<double, kNuggetCount> recall{};
  std::array<double, kNuggetCount> f1{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

PRFTable prf_from_confusion(const ConfusionMatrix& m);

struct TieGapRecord {
  std::size_t lo = 0;  // unordered label pair in canonical order
  std::size_t hi = 0;
  double mean_gap = 0.0;
  std::size_t count = 0;
  double fraction = 0.0;  // count / total utterances (rounding is display-only)
};

// One record per observed unordered top-2 pair over all utterances.
std::vector<TieGapRecord> tie_gap_table(const corpus::Corpus& corpus);

// Per-measure multi-gold accuracy of argmax(pred) against argmax_set(gold).
std::array<double, kMeasureCount> dq_classification_eval(const corpus::Corpus& gold,
                                                         const corpus::PredictionSet& pred);

// Pairs gold argmax sets with predicted argmax labels over a whole corpus,
// in corpus order; the substrate for the ND classical tables.
struct SequenceLabels {
  std::vector<ArgmaxSet> gold_sets;
  std::vector<std::size_t> predicted;
};

SequenceLabels collect_nd_labels(const corpus::Corpus& gold, const corpus::PredictionSet& pred);

}  // namespace nb::classical
