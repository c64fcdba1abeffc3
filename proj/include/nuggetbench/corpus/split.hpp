#pragma once

#include <cstdint>

#include "nuggetbench/corpus/corpus.hpp"

namespace nb::corpus {

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  Corpus train;
  Corpus valid;
  Corpus test;
};

// Disjoint partition of floor(fraction * N) dialogues each, drawn from a
// seed-shuffled order. Fractions must be non-negative with sum <= 1; a
// strictly positive fraction that floors to zero dialogues is an error.
CorpusSplit split_corpus(const Corpus& dialogues, const SplitFractions& fractions,
                         std::uint64_t seed);

}  // namespace nb::corpus
