#pragma once

#include <array>

#include "nuggetbench/corpus/corpus.hpp"
#include "nuggetbench/corpus/json_io.hpp"

namespace nb::baselines {

// Most-popular-label predictor: point mass on the label that most often
// appears among training gold argmaxes, learned per score measure and per
// speaker role for nuggets. Tied counts resolve to canonical order.
struct PopularityModel {
  std::array<std::size_t, kMeasureCount> score_label{};
  std::size_t customer_nugget = 0;
  std::size_t helpdesk_nugget = 0;
};

PopularityModel fit_popularity(const corpus::Corpus& train);

corpus::PredictedDialogue predict_popularity(const PopularityModel& model,
                                             const corpus::Dialogue& input);

// Uniform over the 5 score bins per measure and over the speaker-valid
// nugget labels per utterance (zero mass on the other role).
corpus::PredictedDialogue predict_uniform(const corpus::Dialogue& input);

corpus::PredictionSet predict_popularity_corpus(const PopularityModel& model,
                                                const corpus::Corpus& input);
corpus::PredictionSet predict_uniform_corpus(const corpus::Corpus& input);

}  // namespace nb::baselines
