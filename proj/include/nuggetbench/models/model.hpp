#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "nuggetbench/corpus/corpus.hpp"
#include "nuggetbench/corpus/json_io.hpp"
#include "nuggetbench/models/config.hpp"
#include "nuggetbench/models/vocab.hpp"
#include "nuggetbench/tk/graph.hpp"

namespace nb::models {

class Model {
 public:
  virtual ~Model() = default;

  virtual const ModelConfig& config() const = 0;
  virtual const Vocab& vocab() const = 0;
  virtual std::vector<tk::Var> parameters() const = 0;

  // Builds the loss graph for one dialogue over the live parameters.
  // Quality models sum soft cross-entropy over the three measures; the
  // nugget model averages it over utterances.
  virtual tk::Var dialogue_loss(const corpus::Dialogue& d,
                                std::atomic<std::uint64_t>* clamp_counter = nullptr) = 0;

  // Gradient-free prediction. `nugget_override` substitutes the per-
  // utterance nugget features of the quality model (defaults to the
  // dialogue's gold distributions); the nugget model ignores it.
  virtual corpus::PredictedDialogue predict(
      const corpus::Dialogue& d,
      const std::vector<ProbabilityBins>* nugget_override = nullptr) = 0;

  std::size_t parameter_count() const;
};

std::unique_ptr<Model> build_model(const ModelConfig& config, Vocab vocab);

// Checkpoint plus a JSON sidecar (<path>.json) holding config + vocabulary.
void save_model(const Model& model, const std::string& path);
std::unique_ptr<Model> load_model(const std::string& path);

}  // namespace nb::models
