#include "nuggetbench/corpus/split.hpp"

#include <cmath>
#include <numeric>

#include "nuggetbench/core/error.hpp"
#include "nuggetbench/core/rng.hpp"

namespace nb::corpus {

CorpusSplit split_corpus(const Corpus& dialogues, const SplitFractions& fractions,
                         std::uint64_t seed) {
  const double fs[3] = {fractions.train, fractions.valid, fractions.test};
  double sum = 0.0;
  for (double f : fs) {
    if (f < 0.0) throw ConfigError("split fractions must be non-negative");
    sum += f;
  }
  if (sum > 1.0 + 1e-12) throw ConfigError("split fractions must sum to at most 1");

  const std::size_t n = dialogues.size();
  std::size_t counts[3];
  std::size_t needed = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(fs[i] * static_cast<double>(n)));
    if (fs[i] > 0.0 && counts[i] == 0) {
      throw ValidationError("not enough dialogues: fraction " + std::to_string(fs[i]) +
                            " of " + std::to_string(n) + " yields an empty partition");
    }
    needed += counts[i];
  }
  if (needed > n) throw ValidationError("not enough dialogues for the requested split");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  CorpusSplit split;
  std::size_t cursor = 0;
  Corpus* parts[3] = {&split.train, &split.valid, &split.test};
  for (int i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < counts[i]; ++j) {
      parts[i]->push_back(dialogues[order[cursor++]]);
    }
  }
  return split;
}

}  // namespace nb::corpus
