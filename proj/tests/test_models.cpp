#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nuggetbench/corpus/synthetic.hpp"
#include "nuggetbench/metrics/run_eval.hpp"
#include "nuggetbench/models/curve.hpp"
#include "nuggetbench/models/hcnn_lstm.hpp"
#include "nuggetbench/models/mehgcnn.hpp"
#include "nuggetbench/models/train.hpp"
#include "nuggetbench/tk/gradcheck.hpp"
#include "nuggetbench/tk/init.hpp"

using namespace nb;
using namespace nb::models;

namespace {

ModelConfig toy_dq() {
  ModelConfig cfg = ModelConfig::defaults(Arch::MeHGCNN);
  cfg.embed_dim = 8;
  cfg.conv_channels = 8;
  cfg.context_channels = 8;
  cfg.k_max = 4;
  cfg.seed = 11;
  return cfg;
}

ModelConfig toy_nd() {
  ModelConfig cfg = ModelConfig::defaults(Arch::HcnnLstm);
  cfg.embed_dim = 8;
  cfg.conv_channels = 8;
  cfg.context_channels = 8;
  cfg.seed = 12;
  return cfg;
}

corpus::Corpus tiny_corpus(std::uint64_t seed, std::size_t n) {
  corpus::SynthConfig sc;
  sc.vocab_size = 20;
  sc.min_utterances = 2;
  sc.max_utterances = 5;
  sc.min_tokens = 3;
  sc.max_tokens = 6;
  return corpus::generate_synthetic_corpus(seed, n, sc);
}

}  // namespace

TEST_CASE("vocab") {
  auto corpus = tiny_corpus(1, 4);
  Vocab v = Vocab::build(corpus);
  CHECK(v.size() > 2);
  CHECK(v.lookup("<pad>") == Vocab::kPad);
  CHECK(v.lookup("never-seen-token") == Vocab::kUnk);
  CHECK(v.encode({}) == std::vector<std::size_t>{Vocab::kPad});
  for (const auto& d : corpus) {
    for (const auto& u : d.utterances) {
      auto ids = v.encode(u.tokens);
      CHECK(ids.size() == u.tokens.size());
      for (auto id : ids) CHECK(id != Vocab::kUnk);
    }
  }
}

TEST_CASE("pretrained embedding loader") {
  auto corpus = tiny_corpus(2, 3);
  Vocab v = Vocab::build(corpus);
  tk::Tensor table({v.size(), 4});
  const std::string known = v.words()[2];
  auto path = (std::filesystem::temp_directory_path() / "nb_vecs.txt").string();
  {
    std::ofstream out(path);
    out << "2 4\n";
    out << known << " 1 2 3 4\n";
    out << "zzz-not-in-vocab 9 9 9 9\n";
  }
  std::size_t applied = load_pretrained_embeddings(path, v, table);
  CHECK(applied == 1);
  CHECK(table.at(2, 0) == 1.0);
  CHECK(table.at(2, 3) == 4.0);
  std::filesystem::remove(path);

  {
    std::ofstream out(path);
    out << "1 3\n" << known << " 1 2 3\n";
  }
  CHECK_THROWS_AS(load_pretrained_embeddings(path, v, table), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("dq model shape contracts") {
  auto corpus = tiny_corpus(3, 3);
  auto cfg = toy_dq();
  MeHGCNN model(cfg, Vocab::build(corpus));
  CHECK(model.utterance_feature_dim() == cfg.conv_channels + 2 + 7);

  auto dists = model.forward(corpus.front());
  for (const auto& d : dists) {
    CHECK(d->value.dim() == kScoreBinCount);
    double sum = 0.0;
    for (std::size_t i = 0; i < kScoreBinCount; ++i) {
      sum += d->value.data()[i];
      CHECK(d->value.data()[i] >= 0.0);
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }

  auto pred = model.predict(corpus.front());
  REQUIRE(pred.quality.has_value());

  // Without the nugget feature the utterance vector loses 7 dims.
  ModelConfig no_nug = cfg;
  no_nug.nugget_feature = false;
  MeHGCNN ablated(no_nug, Vocab::build(corpus));
  CHECK(ablated.utterance_feature_dim() == cfg.conv_channels + 2);
}

TEST_CASE("dq ablation parameter counts") {
  auto corpus = tiny_corpus(4, 3);
  Vocab vocab = Vocab::build(corpus);
  auto cfg = toy_dq();
  const std::size_t C = cfg.conv_channels;
  const std::size_t D = cfg.embed_dim;
  const std::size_t X = cfg.context_channels;
  const std::size_t full = MeHGCNN(cfg, vocab).parameter_count();

  // Gating off removes every gate conv: utterance stacks + context layer.
  ModelConfig no_gate = cfg;
  no_gate.gating = false;
  std::size_t gate_params = (cfg.utter_width * D * C + C)        // stack 0 gate
                            + (cfg.utter_width * C * C + C)      // stack 1 gate
                            + (3 * (C + 9) * X + X);             // context gate
  CHECK(full - MeHGCNN(no_gate, vocab).parameter_count() == gate_params);

  // Memory off removes two Bi-GRUs (4 directed GRUs over X -> X).
  ModelConfig no_mem = cfg;
  no_mem.memory = false;
  std::size_t gru_params = 3 * (X * X + X * X + X);  // one directed GRU
  CHECK(full - MeHGCNN(no_mem, vocab).parameter_count() == 4 * gru_params);

  // Nugget feature off shrinks the context conv input by 7 per tap.
  ModelConfig no_nug = cfg;
  no_nug.nugget_feature = false;
  std::size_t gate_factor = cfg.gating ? 2 : 1;
  CHECK(full - MeHGCNN(no_nug, vocab).parameter_count() == gate_factor * 3 * 7 * X);

  // Single-stack variant drops the second utterance stack (conv + gate).
  ModelConfig single = cfg;
  single.multi_stack = false;
  std::size_t stack2 = gate_factor * (cfg.utter_width * C * C + C);
  CHECK(full - MeHGCNN(single, vocab).parameter_count() == stack2);
}

TEST_CASE("nd model shape contracts and masking") {
  auto corpus = tiny_corpus(5, 3);
  auto cfg = toy_nd();
  HcnnLstm model(cfg, Vocab::build(corpus));
  CHECK(model.utterance_feature_dim() == 2 * cfg.conv_channels + 2);

  const auto& d = corpus.front();
  auto dists = model.forward(d);
  REQUIRE(dists.size() == d.utterances.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    double sum = 0.0;
    for (std::size_t n = 0; n < kNuggetCount; ++n) {
      double m = dists[i]->value.data()[n];
      sum += m;
      if (!nugget_valid_for(n, d.utterances[i].speaker)) {
        CHECK(m == 0.0);  // exact, not approximate
      }
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }

  // Masking off: strictly positive mass everywhere.
  ModelConfig unmasked = cfg;
  unmasked.role_masking = false;
  HcnnLstm loose(unmasked, Vocab::build(corpus));
  auto loose_dists = loose.forward(d);
  for (const auto& dist : loose_dists) {
    for (std::size_t n = 0; n < kNuggetCount; ++n) CHECK(dist->value.data()[n] > 0.0);
  }
}

TEST_CASE("nd ablation parameter counts") {
  auto corpus = tiny_corpus(6, 3);
  Vocab vocab = Vocab::build(corpus);
  auto cfg = toy_nd();
  const std::size_t C = cfg.conv_channels;
  const std::size_t D = cfg.embed_dim;
  const std::size_t X = cfg.context_channels;
  const std::size_t full = HcnnLstm(cfg, vocab).parameter_count();

  // Multi-stack off keeps only stack 0: removes stacks 1 and 2, each two
  // convs (widths 2 and 3) over 2C input channels.
  ModelConfig single = cfg;
  single.multi_stack = false;
  std::size_t stack_params = (cfg.nd_width_a * 2 * C * C + C) + (cfg.nd_width_b * 2 * C * C + C);
  CHECK(full - HcnnLstm(single, vocab).parameter_count() == 2 * stack_params);

  // Gating on doubles every utterance conv.
  ModelConfig gated = cfg;
  gated.gating = true;
  std::size_t stack0 = (cfg.nd_width_a * D * C + C) + (cfg.nd_width_b * D * C + C);
  CHECK(HcnnLstm(gated, vocab).parameter_count() - full == stack0 + 2 * stack_params);

  // Memory on adds two Bi-GRUs over X.
  ModelConfig with_mem = cfg;
  with_mem.memory = true;
  std::size_t gru_params = 3 * (X * X + X * X + X);
  CHECK(HcnnLstm(with_mem, vocab).parameter_count() - full == 4 * gru_params);
}

TEST_CASE("full-graph gradient checks at toy dimensions") {
  auto corpus = tiny_corpus(7, 2);
  corpus.resize(1);
  corpus[0].utterances.resize(std::min<std::size_t>(corpus[0].utterances.size(), 3));
  // Re-normalize synthetic ids/tokens into a tiny vocab for speed.
  Vocab vocab = Vocab::build(corpus);

  {
    ModelConfig cfg = toy_dq();
    cfg.embed_dim = 4;
    cfg.conv_channels = 4;
    cfg.context_channels = 4;
    cfg.k_max = 3;
    MeHGCNN model(cfg, vocab);
    auto build = [&] { return model.dialogue_loss(corpus[0]); };
    auto report = tk::check_gradients(build, model.parameters());
    INFO("mehgcnn: " << report.summary());
    CHECK(report.pass);
  }
  {
    ModelConfig cfg = toy_nd();
    cfg.embed_dim = 4;
    cfg.conv_channels = 4;
    cfg.context_channels = 4;
    HcnnLstm model(cfg, vocab);
    auto build = [&] { return model.dialogue_loss(corpus[0]); };
    auto report = tk::check_gradients(build, model.parameters());
    INFO("hcnn-lstm: " << report.summary());
    CHECK(report.pass);
  }
}

TEST_CASE("loss examples") {
  auto corpus = tiny_corpus(8, 1);
  // Point-mass gold with matching prediction: loss 0 (head alone).
  tk::Var logits = tk::constant(tk::Tensor({5}, {100, 0, 0, 0, 0}));
  auto pred = tk::softmax(logits);
  tk::Tensor gold({5}, {1, 0, 0, 0, 0});
  CHECK(tk::cross_entropy(pred, gold)->value.data()[0] == doctest::Approx(0.0).epsilon(1e-9));

  // Gold point mass vs uniform prediction: ln 5.
  tk::Var uniform_logits = tk::constant(tk::Tensor({5}));
  auto u = tk::softmax(uniform_logits);
  CHECK(tk::cross_entropy(u, gold)->value.data()[0] ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));

  // Soft cross-entropy in the prediction is minimized at pred == gold:
  // descend on a free logit head and compare with the gold distribution.
  tk::Var free = tk::make_parameter("free", tk::Tensor({5}));
  tk::Tensor soft_gold({5}, {0.4, 0.3, 0.2, 0.05, 0.05});
  tk::Adam opt({free}, {.lr = 5e-2});
  for (int i = 0; i < 2000; ++i) {
    opt.zero_grad();
    tk::backward(tk::cross_entropy(tk::softmax(free), soft_gold));
    opt.step();
  }
  auto fitted = tk::softmax(free);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(fitted->value.data()[i] == doctest::Approx(soft_gold.data()[i]).epsilon(1e-3));
  }
}

TEST_CASE("training determinism and history") {
  auto corpus = tiny_corpus(9, 6);
  auto run = [&] {
    ModelConfig cfg = toy_nd();
    cfg.epochs = 3;
    cfg.batch_size = 2;
    auto model = build_model(cfg, Vocab::build(corpus));
    TrainOptions opts = TrainOptions::from_config(cfg);
    auto result = train_model(*model, corpus, corpus, opts);
    return std::make_pair(result.history, predict_corpus(*model, corpus).by_id.begin()
                              ->second.nuggets.front().mass());
  };
  auto a = run();
  auto b = run();
  REQUIRE(a.first.size() == b.first.size());
  for (std::size_t i = 0; i < a.first.size(); ++i) {
    CHECK(a.first[i].train_loss == b.first[i].train_loss);
    CHECK(a.first[i].valid_metric == b.first[i].valid_metric);
  }
  CHECK(a.second == b.second);  // bit-identical predictions

  // History CSV shape.
  ModelConfig cfg = toy_nd();
  cfg.epochs = 2;
  auto model = build_model(cfg, Vocab::build(corpus));
  auto result = train_model(*model, corpus, corpus, TrainOptions::from_config(cfg));
  auto csv = history_csv(result);
  CHECK(csv.find("epoch,train_loss,valid_metric,wall_seconds") == 0);
}

TEST_CASE("model save/load round trip") {
  auto corpus = tiny_corpus(10, 3);
  ModelConfig cfg = toy_nd();
  auto model = build_model(cfg, Vocab::build(corpus));
  auto path = (std::filesystem::temp_directory_path() / "nb_model.ckpt").string();
  save_model(*model, path);
  auto loaded = load_model(path);
  CHECK(loaded->config().arch == Arch::HcnnLstm);
  CHECK(loaded->parameter_count() == model->parameter_count());
  auto p1 = model->predict(corpus.front());
  auto p2 = loaded->predict(corpus.front());
  for (std::size_t i = 0; i < p1.nuggets.size(); ++i) {
    CHECK(p1.nuggets[i].mass() == p2.nuggets[i].mass());
  }
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".json");
}

TEST_CASE("dq nugget feature override") {
  auto corpus = tiny_corpus(11, 2);
  ModelConfig cfg = toy_dq();
  MeHGCNN model(cfg, Vocab::build(corpus));
  const auto& d = corpus.front();
  auto base = model.predict(d);
  std::vector<ProbabilityBins> uniform_feats;
  for (const auto& u : d.utterances) {
    std::vector<double> mass(kNuggetCount, 0.0);
    for (std::size_t i = 0; i < kNuggetCount; ++i) {
      if (nugget_valid_for(i, u.speaker)) mass[i] = 1.0;
    }
    uniform_feats.emplace_back(BinDomain::nuggets(), std::move(mass));
  }
  auto swapped = model.predict(d, &uniform_feats);
  // Different features give (generically) different distributions.
  bool differs = false;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    if ((*base.quality)[m].mass() != (*swapped.quality)[m].mass()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("memory layer attention equations") {
  Rng rng(77);
  const std::size_t dim = 5, k = 2;
  // Zero input-memory GRUs force identical (zero) keys, hence uniform
  // attention; with k = 2 the residual output is (O_1 + O_2)/2 + cl_i.
  MemoryLayer layer = MemoryLayer::init(dim, rng, "mem");
  for (auto& p : [&] {
         std::vector<tk::Var> ps;
         layer.input_memory.collect(ps);
         return ps;
       }()) {
    p->value.fill(0.0);
  }
  std::vector<tk::Var> cl;
  for (std::size_t i = 0; i < k; ++i) cl.push_back(tk::constant(tk::glorot_uniform({dim}, rng)));
  std::vector<tk::Var> values = layer.output_memory.apply(cl);
  auto ml = layer.apply(cl);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      double expect = 0.5 * (values[0]->value.data()[d] + values[1]->value.data()[d]) +
                      cl[i]->value.data()[d];
      CHECK(ml[i]->value.data()[d] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  // Fully zero memory (both GRU banks) degenerates to the residual alone.
  MemoryLayer zeroed = MemoryLayer::init(dim, rng, "zmem");
  std::vector<tk::Var> all;
  zeroed.collect(all);
  for (auto& p : all) p->value.fill(0.0);
  auto passthrough = zeroed.apply(cl);
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(passthrough[i]->value.values() == cl[i]->value.values());
  }
}

TEST_CASE("zero-weight heads emit uniform distributions") {
  auto corpus = tiny_corpus(31, 2);
  {
    ModelConfig cfg = toy_dq();
    MeHGCNN model(cfg, Vocab::build(corpus));
    for (auto& p : model.parameters()) {
      if (p->name.rfind("head.", 0) == 0) p->value.fill(0.0);
    }
    auto dists = model.forward(corpus.front());
    for (const auto& d : dists) {
      for (std::size_t i = 0; i < kScoreBinCount; ++i) {
        CHECK(d->value.data()[i] == doctest::Approx(0.2).epsilon(1e-12));
      }
    }
  }
  {
    ModelConfig cfg = toy_nd();
    HcnnLstm model(cfg, Vocab::build(corpus));
    for (auto& p : model.parameters()) {
      if (p->name.rfind("head.", 0) == 0) p->value.fill(0.0);
    }
    auto dists = model.forward(corpus.front());
    for (std::size_t i = 0; i < dists.size(); ++i) {
      Speaker s = corpus.front().utterances[i].speaker;
      double valid = s == Speaker::Customer ? 0.25 : 1.0 / 3.0;
      for (std::size_t n = 0; n < kNuggetCount; ++n) {
        double expect = nugget_valid_for(n, s) ? valid : 0.0;
        CHECK(dists[i]->value.data()[n] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bi-lstm context is direction-swap covariant") {
  // Running the mirrored sequence through direction-swapped parameters
  // reproduces the original cl values at mirrored positions.
  Rng rng(55);
  const std::size_t in_dim = 4, hidden = 3, k = 5;
  auto fwd = tk::LstmParams::init(in_dim, hidden, rng, "f");
  auto bwd = tk::LstmParams::init(in_dim, hidden, rng, "b");
  std::vector<tk::Var> xs;
  for (std::size_t i = 0; i < k; ++i) xs.push_back(tk::constant(tk::glorot_uniform({in_dim}, rng)));

  auto encode = [&](const std::vector<tk::Var>& seq, const tk::LstmParams& f,
                    const tk::LstmParams& b) {
    std::vector<tk::Var> hf(seq.size()), hb(seq.size());
    tk::LstmState s{tk::constant(tk::Tensor({hidden})), tk::constant(tk::Tensor({hidden}))};
    for (std::size_t i = 0; i < seq.size(); ++i) {
      s = tk::lstm_cell(seq[i], s, f);
      hf[i] = s.h;
    }
    s = {tk::constant(tk::Tensor({hidden})), tk::constant(tk::Tensor({hidden}))};
    for (std::size_t i = seq.size(); i-- > 0;) {
      s = tk::lstm_cell(seq[i], s, b);
      hb[i] = s.h;
    }
    std::vector<std::vector<double>> cl(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      cl[i] = tk::tanh(tk::add(hf[i], hb[i]))->value.values();
    }
    return cl;
  };

  auto straight = encode(xs, fwd, bwd);
  std::vector<tk::Var> reversed(xs.rbegin(), xs.rend());
  auto mirrored = encode(reversed, bwd, fwd);
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(straight[i] == mirrored[k - 1 - i]);
  }
}

TEST_CASE("training aborts on non-finite parameters") {
  auto corpus = tiny_corpus(32, 3);
  ModelConfig cfg = toy_nd();
  cfg.epochs = 2;
  auto model = build_model(cfg, Vocab::build(corpus));
  model->parameters().back()->value.data()[0] = std::nan("");  // head bias, always used
  CHECK_THROWS_AS(train_model(*model, corpus, corpus, TrainOptions::from_config(cfg)),
                  NumericError);
}

TEST_CASE("learning curve rows") {
  auto corpus = tiny_corpus(12, 8);
  ModelConfig cfg = toy_nd();
  cfg.epochs = 2;
  TrainOptions opts = TrainOptions::from_config(cfg);
  auto points = learning_curve(cfg, corpus, corpus, {0.5, 1.0}, {1, 2}, opts);
  CHECK(points.size() == 4);
  CHECK(points[0].n_train == 4);
  CHECK(points[1].n_train == 8);
  auto medians = curve_medians(points);
  REQUIRE(medians.size() == 2);
  CHECK(medians[0].first == 0.5);

  CHECK_THROWS_AS(learning_curve(cfg, corpus, corpus, {0.0}, {1}, opts), ConfigError);
  CHECK_THROWS_AS(learning_curve(cfg, corpus, corpus, {0.01}, {1}, opts), ValidationError);
}
