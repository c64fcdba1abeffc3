#include "nuggetbench/baselines/baselines.hpp"

#include "nuggetbench/core/error.hpp"

namespace nb::baselines {

namespace {

std::size_t most_common(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;  // ties keep the earlier canonical label
  }
  return best;
}

}  // namespace

PopularityModel fit_popularity(const corpus::Corpus& train) {
  if (train.empty()) throw ValidationError("popularity baseline: empty training corpus");
  std::array<std::vector<std::size_t>, kMeasureCount> score_counts;
  for (auto& c : score_counts) c.assign(kScoreBinCount, 0);
  std::vector<std::size_t> customer_counts(kNuggetCount, 0);
  std::vector<std::size_t> helpdesk_counts(kNuggetCount, 0);

  for (const auto& d : train) {
    if (d.quality) {
      for (std::size_t m = 0; m < kMeasureCount; ++m) {
        for (std::size_t idx : argmax_set((*d.quality)[m]).indices) {
          ++score_counts[m][idx];
        }
      }
    }
    for (const auto& u : d.utterances) {
      auto& counts = u.speaker == Speaker::Customer ? customer_counts : helpdesk_counts;
      for (std::size_t idx : argmax_set(u.gold_nugget).indices) {
        ++counts[idx];
      }
    }
  }

  PopularityModel model;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    model.score_label[m] = most_common(score_counts[m]);
  }
  model.customer_nugget = most_common(customer_counts);
  model.helpdesk_nugget = most_common(helpdesk_counts);
  if (!nugget_valid_for(model.customer_nugget, Speaker::Customer)) {
    model.customer_nugget = kCustomerNuggetBegin;
  }
  if (!nugget_valid_for(model.helpdesk_nugget, Speaker::Helpdesk)) {
    model.helpdesk_nugget = kHelpdeskNuggetBegin;
  }
  return model;
}

corpus::PredictedDialogue predict_popularity(const PopularityModel& model,
                                             const corpus::Dialogue& input) {
  corpus::PredictedDialogue out;
  out.id = input.id;
  for (const auto& u : input.utterances) {
    out.speakers.push_back(u.speaker);
    std::size_t label =
        u.speaker == Speaker::Customer ? model.customer_nugget : model.helpdesk_nugget;
    out.nuggets.push_back(ProbabilityBins::point_mass(BinDomain::nuggets(), label));
  }
  std::array<ProbabilityBins, kMeasureCount> quality;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    quality[m] = ProbabilityBins::point_mass(BinDomain::scores(), model.score_label[m]);
  }
  out.quality = std::move(quality);
  return out;
}

corpus::PredictedDialogue predict_uniform(const corpus::Dialogue& input) {
  corpus::PredictedDialogue out;
  out.id = input.id;
  for (const auto& u : input.utterances) {
    out.speakers.push_back(u.speaker);
    std::vector<double> mass(kNuggetCount, 0.0);
    for (std::size_t i = 0; i < kNuggetCount; ++i) {
      if (nugget_valid_for(i, u.speaker)) mass[i] = 1.0;
    }
    out.nuggets.emplace_back(BinDomain::nuggets(), std::move(mass));
  }
  std::array<ProbabilityBins, kMeasureCount> quality;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    quality[m] = ProbabilityBins::uniform(BinDomain::scores());
  }
  out.quality = std::move(quality);
  return out;
}

corpus::PredictionSet predict_popularity_corpus(const PopularityModel& model,
                                                const corpus::Corpus& input) {
  corpus::PredictionSet preds;
  for (const auto& d : input) preds.insert(predict_popularity(model, d));
  return preds;
}

corpus::PredictionSet predict_uniform_corpus(const corpus::Corpus& input) {
  corpus::PredictionSet preds;
  for (const auto& d : input) preds.insert(predict_uniform(d));
  return preds;
}

}  // namespace nb::baselines
