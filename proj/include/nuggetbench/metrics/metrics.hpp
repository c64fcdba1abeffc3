#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nuggetbench/core/bins.hpp"
#include "nuggetbench/core/labels.hpp"

namespace nb::metrics {

// Cross-bin distance for ordered bins: sum of absolute cumulative
// differences divided by B-1. A normalized unit-spacing transport distance,
// so it is symmetric, zero iff equal, bounded by 1, and satisfies the
// triangle inequality.
double nmd(const ProbabilityBins& gold, const ProbabilityBins& pred);

// Cross-bin divergence for ordered bins:
//   DW_i(p,q) = sum_j |i-j| (p_j - q_j)^2
//   OD(p,q)   = mean of DW_i over the support of p
//   RSNOD     = sqrt( (OD(p,q) + OD(q,p)) / 2 / (B-1) )
double rsnod(const ProbabilityBins& gold, const ProbabilityBins& pred);

// Jensen-Shannon divergence, base-2 logs, 0*log0 = 0. Bin-by-bin; order
// irrelevant. In [0,1].
double jsd(const ProbabilityBins& gold, const ProbabilityBins& pred);

// Root normalized sum of squares: sqrt( sum_i (g_i - p_i)^2 / 2 ). In [0,1].
double rnss(const ProbabilityBins& gold, const ProbabilityBins& pred);

struct DialogueQualityScore {
  std::string dialogue_id;
  std::array<double, kMeasureCount> nmd{};
  std::array<double, kMeasureCount> rsnod{};
};

struct RunScoreDQ {
  std::array<double, kMeasureCount> mean_nmd{};
  std::array<double, kMeasureCount> mean_rsnod{};
  std::vector<DialogueQualityScore> per_dialogue;
};

struct UtteranceNuggetScore {
  std::string dialogue_id;
  std::size_t utterance_index = 0;
  double jsd = 0.0;
  double rnss = 0.0;
};

enum class NdAggregation {
  FlatUtterancePool,   // default: mean over all test utterances
  PerDialogueThenRun,  // mean of per-dialogue means
};

struct RunScoreND {
  double mean_jsd = 0.0;
  double mean_rnss = 0.0;
  std::vector<UtteranceNuggetScore> per_utterance;
};

// Gold dialogues paired with per-measure predicted score distributions.
struct DqPrediction {
  std::string dialogue_id;
  std::array<ProbabilityBins, kMeasureCount> quality;
};

// Gold dialogues paired with one predicted 7-nugget distribution per
// utterance.
struct NdPrediction {
  std::string dialogue_id;
  std::vector<ProbabilityBins> nuggets;
};

}  // namespace nb::metrics
