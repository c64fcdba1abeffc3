#include "nuggetbench/models/hcnn_lstm.hpp"

#include "nuggetbench/tk/init.hpp"

namespace nb::models {

using namespace nb::tk;

HcnnLstm::HcnnLstm(ModelConfig config, Vocab vocab)
    : cfg_(std::move(config)), vocab_(std::move(vocab)) {
  cfg_.validate();
  Rng rng(cfg_.seed);
  embed_ = make_parameter("embed", glorot_uniform({vocab_.size(), cfg_.embed_dim}, rng));

  const std::size_t stacks = cfg_.effective_utter_stacks();
  for (std::size_t s = 0; s < stacks; ++s) {
    std::size_t in_ch = s == 0 ? cfg_.embed_dim : 2 * cfg_.conv_channels;
    std::string prefix = "utter" + std::to_string(s);
    StackConvs sc{
        GatedConv::init(cfg_.nd_width_a, in_ch, cfg_.conv_channels, cfg_.gating, rng,
                        prefix + ".narrow"),
        GatedConv::init(cfg_.nd_width_b, in_ch, cfg_.conv_channels, cfg_.gating, rng,
                        prefix + ".wide"),
    };
    utter_stacks_.push_back(std::move(sc));
  }
  for (std::size_t s = 0; s < cfg_.context_stacks; ++s) {
    std::size_t in_dim = s == 0 ? utterance_feature_dim() : cfg_.context_channels;
    std::string prefix = "context" + std::to_string(s);
    context_stacks_.push_back({LstmParams::init(in_dim, cfg_.context_channels, rng, prefix + ".fwd"),
                               LstmParams::init(in_dim, cfg_.context_channels, rng, prefix + ".bwd")});
  }
  if (cfg_.memory) {
    memory_ = MemoryLayer::init(cfg_.context_channels, rng, "memory");
  }
  head_w_ = make_parameter("head.w",
                           glorot_uniform({cfg_.context_channels, kNuggetCount}, rng));
  head_b_ = make_parameter("head.b", Tensor({kNuggetCount}));
}

std::vector<Var> HcnnLstm::parameters() const {
  std::vector<Var> out;
  out.push_back(embed_);
  for (const auto& s : utter_stacks_) {
    s.narrow.collect(out);
    s.wide.collect(out);
  }
  for (const auto& s : context_stacks_) {
    for (const auto& p : s.fwd.parameters()) out.push_back(p);
    for (const auto& p : s.bwd.parameters()) out.push_back(p);
  }
  if (cfg_.memory) memory_.collect(out);
  out.push_back(head_w_);
  out.push_back(head_b_);
  return out;
}

Var HcnnLstm::encode_utterance(const corpus::Utterance& u) {
  Var x = embedding_lookup(embed_, vocab_.encode(u.tokens));
  for (const auto& stack : utter_stacks_) {
    Var a = stack.narrow.apply(x, cfg_.nd_width_a);
    Var b = stack.wide.apply(x, cfg_.nd_width_b);
    x = concat({a, b}, 1);
  }
  return concat({maxpool_time(x), speaker_onehot(u.speaker)});
}

std::vector<Var> HcnnLstm::forward(const corpus::Dialogue& d) {
  if (d.utterances.empty()) {
    throw ValidationError("dialogue " + d.id + " has no utterances");
  }
  const std::size_t k = d.utterances.size();
  std::vector<Var> seq;
  seq.reserve(k);
  for (const auto& u : d.utterances) seq.push_back(encode_utterance(u));

  for (const auto& stack : context_stacks_) {
    std::vector<Var> forward_h(k), backward_h(k);
    LstmState state{constant(Tensor({cfg_.context_channels})),
                    constant(Tensor({cfg_.context_channels}))};
    for (std::size_t i = 0; i < k; ++i) {
      state = lstm_cell(seq[i], state, stack.fwd);
      forward_h[i] = state.h;
    }
    state = {constant(Tensor({cfg_.context_channels})), constant(Tensor({cfg_.context_channels}))};
    for (std::size_t i = k; i-- > 0;) {
      state = lstm_cell(seq[i], state, stack.bwd);
      backward_h[i] = state.h;
    }
    for (std::size_t i = 0; i < k; ++i) {
      seq[i] = tk::tanh(add(forward_h[i], backward_h[i]));
    }
  }

  if (cfg_.memory) seq = memory_.apply(seq);

  std::vector<Var> dists(k);
  for (std::size_t i = 0; i < k; ++i) {
    Var logits = affine(seq[i], head_w_, head_b_);
    dists[i] = cfg_.role_masking ? masked_softmax(logits, role_mask(d.utterances[i].speaker))
                                 : softmax(logits);
  }
  return dists;
}

Var HcnnLstm::dialogue_loss(const corpus::Dialogue& d,
                            std::atomic<std::uint64_t>* clamp_counter) {
  auto dists = forward(d);
  Var total;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const auto& gold_bins = d.utterances[i].gold_nugget;
    if (gold_bins.empty()) {
      throw ValidationError("dialogue " + d.id + " utterance " + std::to_string(i) +
                            ": missing gold nugget distribution");
    }
    Tensor gold({kNuggetCount}, gold_bins.mass());
    Var l = cross_entropy(dists[i], gold, clamp_counter);
    total = i == 0 ? l : add(total, l);
  }
  return scale(total, 1.0 / static_cast<double>(dists.size()));
}

corpus::PredictedDialogue HcnnLstm::predict(const corpus::Dialogue& d,
                                            const std::vector<ProbabilityBins>*) {
  NoGradGuard eval_only;
  auto dists = forward(d);
  corpus::PredictedDialogue out;
  out.id = d.id;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    out.speakers.push_back(d.utterances[i].speaker);
    out.nuggets.emplace_back(BinDomain::nuggets(), dists[i]->value.values());
  }
  return out;
}

}  // namespace nb::models
