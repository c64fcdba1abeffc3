#include "nuggetbench/models/mehgcnn.hpp"

#include "nuggetbench/tk/init.hpp"

namespace nb::models {

using namespace nb::tk;

MeHGCNN::MeHGCNN(ModelConfig config, Vocab vocab)
    : cfg_(std::move(config)), vocab_(std::move(vocab)) {
  cfg_.validate();
  Rng rng(cfg_.seed);
  embed_ = make_parameter("embed", glorot_uniform({vocab_.size(), cfg_.embed_dim}, rng));

  const std::size_t stacks = cfg_.effective_utter_stacks();
  for (std::size_t s = 0; s < stacks; ++s) {
    std::size_t in_ch = s == 0 ? cfg_.embed_dim : cfg_.conv_channels;
    utter_convs_.push_back(GatedConv::init(cfg_.utter_width, in_ch, cfg_.conv_channels,
                                           cfg_.gating, rng, "utter" + std::to_string(s)));
  }
  context_conv_ = GatedConv::init(3, utterance_feature_dim(), cfg_.context_channels, cfg_.gating,
                                  rng, "context");
  if (cfg_.memory) {
    memory_ = MemoryLayer::init(cfg_.context_channels, rng, "memory");
  }
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    std::string prefix = "head." + std::string(kMeasureNames[m]);
    heads_[m].w = make_parameter(
        prefix + ".w", glorot_uniform({cfg_.k_max * cfg_.context_channels, kScoreBinCount}, rng));
    heads_[m].b = make_parameter(prefix + ".b", Tensor({kScoreBinCount}));
  }
}

std::size_t MeHGCNN::utterance_feature_dim() const {
  return cfg_.conv_channels + 2 + (cfg_.nugget_feature ? kNuggetCount : 0);
}

std::vector<Var> MeHGCNN::parameters() const {
  std::vector<Var> out;
  out.push_back(embed_);
  for (const auto& c : utter_convs_) c.collect(out);
  context_conv_.collect(out);
  if (cfg_.memory) memory_.collect(out);
  for (const auto& h : heads_) {
    out.push_back(h.w);
    out.push_back(h.b);
  }
  return out;
}

Var MeHGCNN::encode_utterance(const corpus::Utterance& u, const ProbabilityBins* nugget_feat) {
  Var x = embedding_lookup(embed_, vocab_.encode(u.tokens));
  for (const auto& conv : utter_convs_) {
    x = conv.apply(x, cfg_.utter_width);
  }
  std::vector<Var> parts{maxpool_time(x), speaker_onehot(u.speaker)};
  if (cfg_.nugget_feature) {
    if (nugget_feat == nullptr) {
      throw ValidationError("dialogue utterance " + std::to_string(u.index) +
                            ": the quality model needs a nugget feature distribution");
    }
    parts.push_back(constant(Tensor({kNuggetCount}, nugget_feat->mass())));
  }
  return concat(parts);
}

std::array<Var, kMeasureCount> MeHGCNN::forward(
    const corpus::Dialogue& d, const std::vector<ProbabilityBins>* nugget_override) {
  if (d.utterances.empty()) {
    throw ValidationError("dialogue " + d.id + " has no utterances");
  }
  if (nugget_override && nugget_override->size() != d.utterances.size()) {
    throw ValidationError("dialogue " + d.id + ": nugget feature count " +
                          std::to_string(nugget_override->size()) + " != utterance count");
  }
  const std::size_t k = std::min<std::size_t>(d.utterances.size(), cfg_.k_max);

  std::vector<Var> ul;
  ul.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const ProbabilityBins* feat = nullptr;
    if (cfg_.nugget_feature) {
      feat = nugget_override ? &(*nugget_override)[i] : &d.utterances[i].gold_nugget;
      if (feat->empty()) {
        throw ValidationError("dialogue " + d.id + " utterance " + std::to_string(i) +
                              ": missing nugget feature");
      }
    }
    ul.push_back(encode_utterance(d.utterances[i], feat));
  }

  // Width-3 conv over the utterance sequence sees (previous, current, next)
  // with zero vectors at the dialogue boundaries.
  Var ctx = context_conv_.apply(stack_rows(ul), 3);
  std::vector<Var> cl(k);
  for (std::size_t i = 0; i < k; ++i) cl[i] = row(ctx, i);

  std::vector<Var> ml = cfg_.memory ? memory_.apply(cl) : cl;

  // Fixed-length concat over k_max slots, zero padded.
  std::vector<Var> slots = ml;
  for (std::size_t i = k; i < cfg_.k_max; ++i) {
    slots.push_back(constant(Tensor({cfg_.context_channels})));
  }
  Var flat = concat(slots);

  std::array<Var, kMeasureCount> dists;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    dists[m] = softmax(affine(flat, heads_[m].w, heads_[m].b));
  }
  return dists;
}

Var MeHGCNN::dialogue_loss(const corpus::Dialogue& d,
                           std::atomic<std::uint64_t>* clamp_counter) {
  if (!d.quality) {
    throw ValidationError("dialogue " + d.id + ": quality training needs gold A/E/S labels");
  }
  auto dists = forward(d);
  Var total;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    Tensor gold({kScoreBinCount}, (*d.quality)[m].mass());
    Var l = cross_entropy(dists[m], gold, clamp_counter);
    total = m == 0 ? l : add(total, l);
  }
  return total;
}

corpus::PredictedDialogue MeHGCNN::predict(
    const corpus::Dialogue& d, const std::vector<ProbabilityBins>* nugget_override) {
  NoGradGuard eval_only;
  auto dists = forward(d, nugget_override);
  corpus::PredictedDialogue out;
  out.id = d.id;
  std::array<ProbabilityBins, kMeasureCount> quality;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    quality[m] = ProbabilityBins(BinDomain::scores(), dists[m]->value.values());
  }
  out.quality = std::move(quality);
  return out;
}

}  // namespace nb::models
