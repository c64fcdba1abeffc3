#pragma once

#include <array>

#include "nuggetbench/models/blocks.hpp"
#include "nuggetbench/models/model.hpp"

namespace nb::models {

// Dialogue-quality model: embedding, 2-stack gated-conv utterance encoder
// with speaker and nugget features, width-3 gated-conv context layer,
// Bi-GRU memory with one attention hop, and three 5-way softmax heads.
class MeHGCNN : public Model {
 public:
  MeHGCNN(ModelConfig config, Vocab vocab);

  const ModelConfig& config() const override { return cfg_; }
  const Vocab& vocab() const override { return vocab_; }
  std::vector<tk::Var> parameters() const override;

  tk::Var dialogue_loss(const corpus::Dialogue& d,
                        std::atomic<std::uint64_t>* clamp_counter = nullptr) override;
  corpus::PredictedDialogue predict(
      const corpus::Dialogue& d,
      const std::vector<ProbabilityBins>* nugget_override = nullptr) override;

  // One distribution node per measure; exposed for gradient checking.
  std::array<tk::Var, kMeasureCount> forward(
      const corpus::Dialogue& d, const std::vector<ProbabilityBins>* nugget_override = nullptr);

  std::size_t utterance_feature_dim() const;

 private:
  tk::Var encode_utterance(const corpus::Utterance& u, const ProbabilityBins* nugget_feat);

  ModelConfig cfg_;
  Vocab vocab_;
  tk::Var embed_;
  std::vector<GatedConv> utter_convs_;
  GatedConv context_conv_;
  MemoryLayer memory_;
  struct Head {
    tk::Var w, b;
  };
  std::array<Head, kMeasureCount> heads_;
};

}  // namespace nb::models
