#include "nuggetbench/corpus/synthetic.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <json.hpp>

#include "nuggetbench/core/error.hpp"
#include "nuggetbench/core/rng.hpp"

namespace nb::corpus {

namespace {

constexpr std::array<const char*, kNuggetCount> kNuggetMarkers = {
    "mk_cnug0", "mk_cnugstar", "mk_cnug", "mk_cnan",
    "mk_hnugstar", "mk_hnug", "mk_hnan"};

std::string quality_marker(Measure m, std::size_t bin) {
  static const char* prefix[] = {"qa", "qe", "qs"};
  return std::string(prefix[static_cast<std::size_t>(m)]) + std::to_string(bin);
}

std::size_t draw_true_nugget(Rng& rng, Speaker speaker, bool first, bool last) {
  if (speaker == Speaker::Customer) {
    if (first) {
      // Dialogues open with the problem statement most of the time.
      return rng.bernoulli(0.85) ? static_cast<std::size_t>(Nugget::CNug0)
                                 : static_cast<std::size_t>(Nugget::CNan);
    }
    if (last) {
      const double w[] = {0.0, 0.5, 0.3, 0.2};  // CNUG0, CNUG*, CNUG, CNaN
      return rng.pick_weighted(w);
    }
    const double w[] = {0.05, 0.15, 0.5, 0.3};
    return rng.pick_weighted(w);
  }
  if (last) {
    const double w[] = {0.45, 0.35, 0.2};  // HNUG*, HNUG, HNaN
    return kHelpdeskNuggetBegin + rng.pick_weighted(w);
  }
  const double w[] = {0.15, 0.55, 0.3};
  return kHelpdeskNuggetBegin + rng.pick_weighted(w);
}

std::size_t vote_nugget(Rng& rng, std::size_t true_label, Speaker speaker, double agreement) {
  if (rng.bernoulli(agreement)) return true_label;
  std::size_t begin = speaker == Speaker::Customer ? kCustomerNuggetBegin : kHelpdeskNuggetBegin;
  std::size_t end = speaker == Speaker::Customer ? kCustomerNuggetEnd : kHelpdeskNuggetEnd;
  std::size_t pick = begin + rng.uniform_index(end - begin - 1);
  if (pick >= true_label) ++pick;  // uniform over the other role-valid labels
  return pick;
}

std::size_t vote_score(Rng& rng, std::size_t true_bin, double agreement) {
  if (rng.bernoulli(agreement)) return true_bin;
  // Ordinal noise: a neighboring bin.
  bool up = rng.bernoulli(0.5);
  if (true_bin == 0) up = true;
  if (true_bin == kScoreBinCount - 1) up = false;
  return up ? true_bin + 1 : true_bin - 1;
}

}  // namespace

void SynthConfig::validate() const {
  if (vocab_size == 0) throw ConfigError("synthetic corpus: vocabulary must be non-empty");
  if (max_utterances == 0 || min_utterances == 0 || min_utterances > max_utterances) {
    throw ConfigError("synthetic corpus: bad utterance-count range");
  }
  if (min_tokens == 0 || min_tokens > max_tokens) {
    throw ConfigError("synthetic corpus: bad token-count range");
  }
  if (annotators == 0) throw ConfigError("synthetic corpus: annotators must be positive");
  if (agreement < 0.0 || agreement > 1.0) {
    throw ConfigError("synthetic corpus: agreement must be in [0,1]");
  }
  if (quality_marker_rate < 0.0 || quality_marker_rate > 1.0) {
    throw ConfigError("synthetic corpus: quality_marker_rate must be in [0,1]");
  }
}

SynthConfig synth_config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  SynthConfig cfg;
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j[key].get<std::decay_t<decltype(slot)>>();
  };
  get("vocab_size", cfg.vocab_size);
  get("min_utterances", cfg.min_utterances);
  get("max_utterances", cfg.max_utterances);
  get("min_tokens", cfg.min_tokens);
  get("max_tokens", cfg.max_tokens);
  get("annotators", cfg.annotators);
  get("agreement", cfg.agreement);
  get("quality_marker_rate", cfg.quality_marker_rate);
  cfg.validate();
  return cfg;
}

Corpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n_dialogues,
                                 const SynthConfig& config) {
  config.validate();
  Rng rng(seed);
  Corpus corpus;
  corpus.reserve(n_dialogues);

  for (std::size_t n = 0; n < n_dialogues; ++n) {
    Dialogue d;
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "synth-%06zu", n);
      d.id = buf;
    }
    const std::size_t n_utts = rng.uniform_range(config.min_utterances, config.max_utterances);

    // Latent true quality; E and S wobble around A by one bin.
    std::array<std::size_t, kMeasureCount> true_score{};
    true_score[0] = rng.uniform_index(kScoreBinCount);
    for (std::size_t m = 1; m < kMeasureCount; ++m) {
      true_score[m] = vote_score(rng, true_score[0], 0.6);
    }

    AnnotationSet votes;
    votes.dialogue_id = d.id;
    votes.annotator_count = config.annotators;

    for (std::size_t i = 0; i < n_utts; ++i) {
      Utterance u;
      u.index = i;
      u.speaker = i % 2 == 0 ? Speaker::Customer : Speaker::Helpdesk;
      bool last_of_role = i + 2 >= n_utts;
      std::size_t true_nugget = draw_true_nugget(rng, u.speaker, i == 0, last_of_role);

      const std::size_t len = rng.uniform_range(config.min_tokens, config.max_tokens);
      u.tokens.push_back(kNuggetMarkers[true_nugget]);
      for (std::size_t m = 0; m < kMeasureCount; ++m) {
        if (rng.bernoulli(config.quality_marker_rate)) {
          u.tokens.push_back(quality_marker(static_cast<Measure>(m), true_score[m]));
        }
      }
      while (u.tokens.size() < len) {
        u.tokens.push_back("w" + std::to_string(rng.uniform_index(config.vocab_size)));
      }
      rng.shuffle(u.tokens);

      std::array<std::size_t, kNuggetCount> counts{};
      for (std::size_t a = 0; a < config.annotators; ++a) {
        ++counts[vote_nugget(rng, true_nugget, u.speaker, config.agreement)];
      }
      votes.per_utterance_votes.push_back(counts);
      d.utterances.push_back(std::move(u));
    }

    std::array<std::array<std::size_t, kScoreBinCount>, kMeasureCount> score_votes{};
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      for (std::size_t a = 0; a < config.annotators; ++a) {
        ++score_votes[m][vote_score(rng, true_score[m], config.agreement)];
      }
    }
    votes.per_measure_votes = score_votes;

    AggregatedAnnotations agg = aggregate_annotations(votes);
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
      d.utterances[i].gold_nugget = std::move(agg.per_utterance[i]);
    }
    d.quality = std::move(agg.per_measure);
    corpus.push_back(std::move(d));
  }
  return corpus;
}

}  // namespace nb::corpus
