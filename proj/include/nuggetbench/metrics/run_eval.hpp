#pragma once

#include "nuggetbench/corpus/corpus.hpp"
#include "nuggetbench/corpus/json_io.hpp"
#include "nuggetbench/metrics/metrics.hpp"

namespace nb::metrics {

struct EvalOptions {
  std::size_t threads = 1;
  NdAggregation nd_aggregation = NdAggregation::FlatUtterancePool;
};

// Per-measure unweighted mean of per-dialogue NMD and RSNOD. Every gold
// dialogue must carry quality annotations and have a prediction; violations
// throw ValidationError naming the dialogue.
RunScoreDQ evaluate_dq_run(const corpus::Corpus& gold, const corpus::PredictionSet& pred,
                           const EvalOptions& options = {});

// Mean JSD and RNSS over test utterances (flat pool by default; an
// alternative per-dialogue-then-run aggregation is available). Every
// utterance needs exactly one 7-nugget prediction.
RunScoreND evaluate_nd_run(const corpus::Corpus& gold, const corpus::PredictionSet& pred,
                           const EvalOptions& options = {});

}  // namespace nb::metrics
