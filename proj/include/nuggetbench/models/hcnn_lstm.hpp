#pragma once

#include "nuggetbench/models/blocks.hpp"
#include "nuggetbench/models/model.hpp"

namespace nb::models {

// Nugget-detection model: embedding, 3-stack utterance encoder of two
// parallel convs (widths 2 and 3) concatenated on the channel axis,
// 2-stack Bi-LSTM context layer with tanh(forward + backward), and a 7-way
// role-masked softmax head per utterance. Gating and a memory layer are
// off by default but constructible.
class HcnnLstm : public Model {
 public:
  HcnnLstm(ModelConfig config, Vocab vocab);

  const ModelConfig& config() const override { return cfg_; }
  const Vocab& vocab() const override { return vocab_; }
  std::vector<tk::Var> parameters() const override;

  tk::Var dialogue_loss(const corpus::Dialogue& d,
                        std::atomic<std::uint64_t>* clamp_counter = nullptr) override;
  corpus::PredictedDialogue predict(
      const corpus::Dialogue& d,
      const std::vector<ProbabilityBins>* nugget_override = nullptr) override;

  // One 7-way distribution node per utterance; exposed for gradient checks.
  std::vector<tk::Var> forward(const corpus::Dialogue& d);

  std::size_t utterance_feature_dim() const { return 2 * cfg_.conv_channels + 2; }

 private:
  struct StackConvs {
    GatedConv narrow;  // width nd_width_a
    GatedConv wide;    // width nd_width_b
  };
  tk::Var encode_utterance(const corpus::Utterance& u);

  ModelConfig cfg_;
  Vocab vocab_;
  tk::Var embed_;
  std::vector<StackConvs> utter_stacks_;
  struct BiLstm {
    tk::LstmParams fwd;
    tk::LstmParams bwd;
  };
  std::vector<BiLstm> context_stacks_;
  MemoryLayer memory_;
  tk::Var head_w_, head_b_;
};

}  // namespace nb::models
