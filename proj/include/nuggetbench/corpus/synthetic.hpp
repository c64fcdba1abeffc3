#pragma once

#include <cstdint>
#include <string>

#include "nuggetbench/corpus/corpus.hpp"

namespace nb::corpus {

// Synthetic customer/helpdesk dialogues with token patterns correlated to
// nugget classes and quality scores, and gold distributions produced by
// simulated annotator votes (so every mass is a multiple of 1/annotators).
struct SynthConfig {
  std::size_t vocab_size = 120;  // filler vocabulary
  std::size_t min_utterances = 2;
  std::size_t max_utterances = 8;
  std::size_t min_tokens = 4;
  std::size_t max_tokens = 12;
  std::size_t annotators = 19;
  // Probability that an annotator votes the consensus label; 1.0 makes
  // every gold distribution a point mass.
  double agreement = 0.85;
  // Probability that an utterance carries each of the three score-marker
  // tokens (the learnable quality signal).
  double quality_marker_rate = 0.9;

  void validate() const;
};

SynthConfig synth_config_from_json_file(const std::string& path);

Corpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n_dialogues,
                                 const SynthConfig& config = {});

}  // namespace nb::corpus
