// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nuggetbench/baselines/baselines.hpp"
#include "nuggetbench/classical/classical.hpp"
#include "nuggetbench/corpus/json_io.hpp"
#include "nuggetbench/corpus/split.hpp"
#include "nuggetbench/corpus/synthetic.hpp"
#include "nuggetbench/metrics/run_eval.hpp"
#include "nuggetbench/models/curve.hpp"
#include "nuggetbench/models/hcnn_lstm.hpp"
#include "nuggetbench/models/mehgcnn.hpp"
#include "nuggetbench/models/train.hpp"
#include "nuggetbench/tk/cells.hpp"
#include "nuggetbench/tk/gradcheck.hpp"
#include "nuggetbench/tk/init.hpp"

using namespace nb;

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string title) : number_(number), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) {
      failed_ = true;
      if (!detail_.empty()) detail_ += "; ";
      detail_ += what;
    }
  }
  void note(const std::string& text) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += text;
  }
  ~Criterion() {
    std::printf("criterion %2d [%s] %s%s%s\n", number_, failed_ ? "FAIL" : "PASS",
                title_.c_str(), detail_.empty() ? "" : " -- ", detail_.c_str());
    std::fflush(stdout);
    if (failed_) ++g_failures;
  }

 private:
  int number_;
  std::string title_;
  std::string detail_;
  bool failed_ = false;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ProbabilityBins bins(const BinDomainPtr& dom, std::vector<double> mass) {
  return ProbabilityBins(dom, std::move(mass));
}

ProbabilityBins random_bins(Rng& rng, const BinDomainPtr& dom) {
  std::vector<double> mass(dom->size());
  for (auto& m : mass) m = rng.bernoulli(0.2) ? 0.0 : rng.uniform01();
  double sum = 0.0;
  for (double m : mass) sum += m;
  if (sum == 0.0) mass[rng.uniform_index(mass.size())] = 1.0;
  return ProbabilityBins(dom, std::move(mass));
}

// Greedy min-cost transport on the line; independent of the cumulative-sum
// route inside the metric.
double transport_cost(const ProbabilityBins& p, const ProbabilityBins& q) {
  std::vector<double> supply = p.mass(), demand = q.mass();
  double cost = 0.0;
  std::size_t i = 0, j = 0;
  while (i < supply.size() && j < demand.size()) {
    if (supply[i] <= 1e-18) {
      ++i;
      continue;
    }
    if (demand[j] <= 1e-18) {
      ++j;
      continue;
    }
    double moved = std::min(supply[i], demand[j]);
    cost += moved * std::abs(double(i) - double(j));
    supply[i] -= moved;
    demand[j] -= moved;
  }
  return cost;
}

corpus::Dialogue table12_dialogue() {
  corpus::Dialogue d;
  d.id = "t12";
  auto add = [&](Speaker s, std::vector<double> mass) {
    corpus::Utterance u;
    u.index = d.utterances.size();
    u.speaker = s;
    u.gold_nugget = bins(BinDomain::nuggets(), std::move(mass));
    d.utterances.push_back(std::move(u));
  };
  add(Speaker::Customer, {0.947, 0, 0, 0.053, 0, 0, 0});
  add(Speaker::Helpdesk, {0, 0, 0, 0, 0.053, 0.894, 0.053});
  add(Speaker::Customer, {0.053, 0, 0.894, 0.053, 0, 0, 0});
  add(Speaker::Helpdesk, {0, 0, 0, 0, 0.474, 0.474, 0.052});
  return d;
}

corpus::Dialogue table13_dialogue() {
  corpus::Dialogue d;
  d.id = "t13";
  auto add = [&](Speaker s, std::vector<double> mass) {
    corpus::Utterance u;
    u.index = d.utterances.size();
    u.speaker = s;
    u.gold_nugget = bins(BinDomain::nuggets(), std::move(mass));
    d.utterances.push_back(std::move(u));
  };
  add(Speaker::Customer, {0.421, 0, 0.105, 0.474, 0, 0, 0});
  add(Speaker::Helpdesk, {0, 0, 0, 0, 0.052, 0.474, 0.474});
  add(Speaker::Customer, {0.052, 0, 0.474, 0.474, 0, 0, 0});
  add(Speaker::Helpdesk, {0, 0, 0, 0, 0, 0.421, 0.579});
  return d;
}

std::vector<std::size_t> seq_of(const std::vector<const char*>& names) {
  std::vector<std::size_t> out;
  for (auto* n : names) out.push_back(nugget_index(n));
  return out;
}

std::string bin_path;  // CLI binary, from argv[0]'s directory conventions

int run_cli(const std::string& args) {
  std::string cmd = "NUGGETBENCH_TIMESTAMP=1999-12-31T23:59:59Z " + bin_path + " " + args +
                    " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path + ">";
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void criterion1_worked_values() {
  Criterion c(1, "metric worked values at 1e-9 (jsd 1e-6)");
  auto start = std::chrono::steady_clock::now();
  auto ord2 = BinDomain::ordinal(2);
  auto ord3 = BinDomain::ordinal(3);
  auto ord5 = BinDomain::ordinal(5);
  auto close = [&](double got, double want, double tol, const std::string& what) {
    c.check(std::abs(got - want) <= tol,
            what + " got " + std::to_string(got) + " want " + std::to_string(want));
  };

  close(metrics::nmd(ProbabilityBins::point_mass(ord5, 0), ProbabilityBins::point_mass(ord5, 4)),
        1.0, 1e-9, "nmd opposite point masses");
  close(metrics::nmd(bins(ord5, {0.5, 0.5, 0, 0, 0}), bins(ord5, {0, 0, 0, 0.5, 0.5})), 0.75,
        1e-9, "nmd split masses");
  auto cum = cumulative(bins(ord5, {0.5, 0.5, 0, 0, 0}));
  close(cum[0], 0.5, 1e-9, "cumulative[0]");
  close(cum[1], 1.0, 1e-9, "cumulative[1]");

  close(metrics::rsnod(bins(ord2, {1, 0}), bins(ord2, {0, 1})), 1.0, 1e-9, "rsnod B=2");
  close(metrics::rsnod(bins(ord3, {1, 0, 0}), bins(ord3, {0, 0, 1})), 1.0, 1e-9, "rsnod B=3");

  double jsd_expected =
      0.5 * (0.5 * std::log2(2.0 / 3.0) + 0.5) + 0.5 * std::log2(4.0 / 3.0);
  close(metrics::jsd(bins(ord2, {0.5, 0.5}), bins(ord2, {1, 0})), jsd_expected, 1e-9,
        "jsd hand evaluation");
  close(metrics::jsd(bins(ord2, {0.5, 0.5}), bins(ord2, {1, 0})), 0.311278, 1e-6,
        "jsd printed value");

  close(metrics::rnss(bins(ord2, {0.5, 0.5}), bins(ord2, {1, 0})), 0.5, 1e-9, "rnss");

  for (auto f : {metrics::nmd, metrics::rsnod, metrics::jsd, metrics::rnss}) {
    auto p = bins(ord5, {0.1, 0.2, 0.3, 0.25, 0.15});
    c.check(f(p, p) == 0.0, "identity not exactly zero");
  }
  double took = elapsed_s(start);
  c.check(took < 1.0, "runtime " + std::to_string(took) + "s exceeds 1s");
}

void criterion2_axioms() {
  Criterion c(2, "metric axioms over 10,000 random pairs per B in {2,5,7}");
  Rng rng(2024);
  std::size_t bad = 0;
  for (std::size_t b : {2u, 5u, 7u}) {
    auto dom = BinDomain::ordinal(b);
    for (int i = 0; i < 10000; ++i) {
      auto p = random_bins(rng, dom);
      auto q = random_bins(rng, dom);
      double max_diff = 0.0;
      for (std::size_t k = 0; k < b; ++k) {
        max_diff = std::max(max_diff, std::abs(p.mass(k) - q.mass(k)));
      }
      for (auto f : {metrics::nmd, metrics::rsnod, metrics::jsd, metrics::rnss}) {
        double d = f(p, q);
        if (!(d >= 0.0 && d <= 1.0 + 1e-12)) ++bad;
        if (f(p, q) != f(q, p)) ++bad;          // symmetry, bit-exact
        if (f(p, p) != 0.0) ++bad;              // identity
        if (d == 0.0 && max_diff > 1e-9) ++bad; // zero implies equal
      }
    }
    // Triangle inequality for NMD over 1,000 random triples.
    for (int i = 0; i < 1000; ++i) {
      auto p = random_bins(rng, dom);
      auto q = random_bins(rng, dom);
      auto r = random_bins(rng, dom);
      if (metrics::nmd(p, r) > metrics::nmd(p, q) + metrics::nmd(q, r) + 1e-12) ++bad;
    }
  }
  c.check(bad == 0, std::to_string(bad) + " axiom violations");
}

void criterion3_transport_oracle() {
  Criterion c(3, "nmd equals the brute-force line-transport oracle (1e-9)");
  Rng rng(33);
  std::size_t bad = 0;
  for (std::size_t b : {2u, 5u, 7u}) {
    auto dom = BinDomain::ordinal(b);
    for (int i = 0; i < 1000; ++i) {
      auto p = random_bins(rng, dom);
      auto q = random_bins(rng, dom);
      double via_transport = transport_cost(p, q) / double(b - 1);
      if (std::abs(metrics::nmd(p, q) - via_transport) > 1e-9) ++bad;
    }
  }
  c.check(bad == 0, std::to_string(bad) + " oracle mismatches");
}

void criterion4_expansion() {
  Criterion c(4, "one-hot expansion reproduces the worked conversions");
  auto e12 = classical::expand_onehot(table12_dialogue());
  c.check(e12.sequences.size() == 2, "4-turn single-tie dialogue should expand to 2");
  if (e12.sequences.size() == 2) {
    c.check(e12.sequences[0] == seq_of({"CNUG0", "HNUG", "CNUG", "HNUG*"}), "sequence 1 of 2");
    c.check(e12.sequences[1] == seq_of({"CNUG0", "HNUG", "CNUG", "HNUG"}), "sequence 2 of 2");
  }
  auto e13 = classical::expand_onehot(table13_dialogue());
  c.check(e13.sequences.size() == 4, "double-tie dialogue should expand to 4");
  if (e13.sequences.size() == 4) {
    c.check(e13.sequences[0] == seq_of({"CNaN", "HNUG", "CNUG", "HNaN"}), "sequence 1 of 4");
    c.check(e13.sequences[1] == seq_of({"CNaN", "HNaN", "CNUG", "HNaN"}), "sequence 2 of 4");
    c.check(e13.sequences[2] == seq_of({"CNaN", "HNUG", "CNaN", "HNaN"}), "sequence 3 of 4");
    c.check(e13.sequences[3] == seq_of({"CNaN", "HNaN", "CNaN", "HNaN"}), "sequence 4 of 4");
  }

  // Property over >= 1,000 synthetic dialogues: count = product of tie
  // multiplicities.
  corpus::SynthConfig sc;
  sc.agreement = 0.6;  // more ties
  auto corpus_data = corpus::generate_synthetic_corpus(404, 1000, sc);
  std::size_t bad = 0, capped = 0;
  for (const auto& d : corpus_data) {
    std::size_t factor = 1;
    for (const auto& u : d.utterances) factor *= argmax_set(u.gold_nugget).indices.size();
    if (factor > classical::kExpansionCap) {
      try {
        classical::expand_onehot(d);
        ++bad;
      } catch (const ValidationError&) {
        ++capped;
      }
      continue;
    }
    if (classical::expand_onehot(d).sequences.size() != factor) ++bad;
  }
  c.check(bad == 0, std::to_string(bad) + " product-rule violations");
  c.note(std::to_string(capped) + " dialogues hit the expansion cap");
}

void criterion5_quantization() {
  Criterion c(5, "19-annotator raw-votes ingestion is 1/19-quantized");
  auto tmp = fs::temp_directory_path() / "nb_accept_votes.json";
  {
    std::ofstream out(tmp);
    out << R"([
      {"id": "t12", "annotators": 19, "turns": [
        {"speaker": "customer", "nugget": {"CNUG0": 18, "CNaN": 1}},
        {"speaker": "helpdesk", "nugget": {"HNUG*": 1, "HNUG": 17, "HNaN": 1}},
        {"speaker": "customer", "nugget": {"CNUG0": 1, "CNUG": 17, "CNaN": 1}},
        {"speaker": "helpdesk", "nugget": {"HNUG*": 9, "HNUG": 9, "HNaN": 1}}
      ]},
      {"id": "t13", "annotators": 19, "turns": [
        {"speaker": "customer", "nugget": {"CNUG0": 8, "CNUG": 2, "CNaN": 9}},
        {"speaker": "helpdesk", "nugget": {"HNUG*": 1, "HNUG": 9, "HNaN": 9}},
        {"speaker": "customer", "nugget": {"CNUG0": 1, "CNUG": 9, "CNaN": 9}},
        {"speaker": "helpdesk", "nugget": {"HNUG": 8, "HNaN": 11}}
      ]}
    ])";
  }
  auto parsed = corpus::parse_corpus(tmp.string(), corpus::CorpusFormat::RawVotes);
  fs::remove(tmp);
  std::size_t off_grid = 0;
  for (const auto& d : parsed) {
    for (const auto& u : d.utterances) {
      for (double m : u.gold_nugget.mass()) {
        double k = std::round(m * 19.0);
        if (m != k / 19.0) ++off_grid;  // exact double equality
      }
    }
  }
  c.check(off_grid == 0, std::to_string(off_grid) + " masses off the 1/19 grid");

  // Printed-table agreement. Two cells (0.894 and 0.052) are truncated
  // rather than rounded in print, so they sit within 1e-3 of the vote
  // fraction; every correctly rounded cell stays within 5e-4.
  auto check_table = [&](const corpus::Dialogue& derived, const corpus::Dialogue& printed) {
    for (std::size_t u = 0; u < printed.utterances.size(); ++u) {
      for (std::size_t n = 0; n < kNuggetCount; ++n) {
        double want = printed.utterances[u].gold_nugget.mass(n);
        double got = derived.utterances[u].gold_nugget.mass(n);
        double raw = std::round(want * 1000.0) / 1000.0;
        double tol = (raw == 0.894 || raw == 0.052) ? 1e-3 : 5e-4;
        c.check(std::abs(got - want) <= tol,
                "cell u" + std::to_string(u) + "/" + std::string(kNuggetNames[n]) +
                    " derived " + std::to_string(got) + " vs printed " + std::to_string(want));
      }
    }
  };
  check_table(parsed[0], table12_dialogue());
  check_table(parsed[1], table13_dialogue());

  // Synthetic 19-annotator corpora live on the same grid.
  auto synth = corpus::generate_synthetic_corpus(5, 50);
  std::size_t synth_off = 0;
  for (const auto& d : synth) {
    for (const auto& u : d.utterances) {
      for (double m : u.gold_nugget.mass()) {
        if (m != std::round(m * 19.0) / 19.0) ++synth_off;
      }
    }
    for (const auto& q : *d.quality) {
      for (double m : q.mass()) {
        if (m != std::round(m * 19.0) / 19.0) ++synth_off;
      }
    }
  }
  c.check(synth_off == 0, std::to_string(synth_off) + " synthetic masses off-grid");
}

void criterion6_gradient_checks() {
  Criterion c(6, "gradient checks: primitives, cells, both architectures (1e-3)");
  auto start = std::chrono::steady_clock::now();
  Rng rng(66);
  using tk::Var;
  auto par = [&](const char* name, std::vector<std::size_t> shape) {
    return tk::make_parameter(name, tk::glorot_uniform(std::move(shape), rng));
  };
  auto run = [&](const std::string& what, const std::function<Var()>& build,
                 const std::vector<Var>& params) {
    auto report = tk::check_gradients(build, params);
    c.check(report.pass, what + ": " + report.summary());
  };

  {
    Var a = par("a", {6}), b = par("b", {6});
    run("elementwise", [&] { return tk::sum(tk::mul(tk::add(a, b), tk::sub(a, b))); }, {a, b});
    run("sigmoid/tanh",
        [&] { return tk::sum(tk::mul(tk::sigmoid(a), tk::tanh(b))); }, {a, b});
    run("dot", [&] { return tk::dot(a, b); }, {a, b});
  }
  {
    Var m = par("m", {4, 5}), n = par("n", {5, 3}), v = par("v", {4}), bias = par("bias", {3});
    run("matmul", [&] { return tk::sum(tk::matmul(m, n)); }, {m, n});
    run("affine", [&] { return tk::sum(tk::affine(v, tk::matmul(m, n), bias)); },
        {m, n, v, bias});
  }
  {
    Var logits = par("logits", {7});
    tk::Tensor gold({7}, {0.3, 0, 0.3, 0.4, 0, 0, 0});
    run("softmax+cross_entropy",
        [&] { return tk::cross_entropy(tk::softmax(logits), gold); }, {logits});
    run("masked_softmax",
        [&] {
          return tk::cross_entropy(tk::masked_softmax(logits, {1, 1, 1, 1, 0, 0, 0}), gold);
        },
        {logits});
  }
  {
    Var x = par("x", {8, 3}), w = par("w", {9, 4}), b = par("b", {4});
    run("conv1d+maxpool",
        [&] {
          auto y = tk::maxpool_time(tk::conv1d(x, w, b, 3));
          return tk::sum(tk::mul(y, y));
        },
        {x, w, b});
    Var w2 = par("w2", {6, 4});
    run("conv1d width-2",
        [&] { return tk::sum(tk::mul(tk::conv1d(x, w2, b, 2), tk::conv1d(x, w2, b, 2))); },
        {x, w2, b});
  }
  {
    Var t = par("t", {6, 3});
    run("embedding_lookup",
        [&] {
          auto e = tk::embedding_lookup(t, {0, 2, 2, 5});
          return tk::sum(tk::mul(e, e));
        },
        {t});
  }
  {
    Var a = par("ca", {3}), b2 = par("cb", {4});
    run("concat/stack/row",
        [&] {
          auto s = tk::stack_rows({tk::concat({a, b2}), tk::concat({a, b2})});
          return tk::sum(tk::mul(tk::row(s, 0), tk::row(s, 1)));
        },
        {a, b2});
  }
  {
    auto gp = tk::GruParams::init(4, 5, rng, "gru");
    Var x = tk::constant(tk::glorot_uniform({4}, rng));
    run("gru_cell",
        [&] {
          Var h = tk::constant(tk::Tensor({5}));
          h = tk::gru_cell(x, h, gp);
          h = tk::gru_cell(x, h, gp);
          return tk::sum(tk::mul(h, h));
        },
        gp.parameters());
    auto lp = tk::LstmParams::init(4, 5, rng, "lstm");
    run("lstm_cell",
        [&] {
          tk::LstmState s{tk::constant(tk::Tensor({5})), tk::constant(tk::Tensor({5}))};
          s = tk::lstm_cell(x, s, lp);
          s = tk::lstm_cell(x, s, lp);
          return tk::sum(tk::mul(s.h, s.c));
        },
        lp.parameters());
  }

  // Both full architectures at toy dimensions (d_w=8, channels=8,
  // hidden=8, K_max=4).
  corpus::SynthConfig sc;
  sc.vocab_size = 12;
  sc.min_utterances = 3;
  sc.max_utterances = 3;
  sc.min_tokens = 3;
  sc.max_tokens = 5;
  auto tiny = corpus::generate_synthetic_corpus(7, 1, sc);
  models::Vocab vocab = models::Vocab::build(tiny);
  {
    models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::MeHGCNN);
    cfg.embed_dim = 8;
    cfg.conv_channels = 8;
    cfg.context_channels = 8;
    cfg.k_max = 4;
    cfg.seed = 3;
    models::MeHGCNN model(cfg, vocab);
    run("mehgcnn full graph", [&] { return model.dialogue_loss(tiny[0]); }, model.parameters());
  }
  {
    models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::HcnnLstm);
    cfg.embed_dim = 8;
    cfg.conv_channels = 8;
    cfg.context_channels = 8;
    cfg.seed = 4;
    models::HcnnLstm model(cfg, vocab);
    run("hcnn-lstm full graph", [&] { return model.dialogue_loss(tiny[0]); },
        model.parameters());
  }
  double took = elapsed_s(start);
  c.note("runtime " + std::to_string(took) + "s");
  c.check(took < 120.0, "runtime exceeds 2 minutes");
}

corpus::Corpus overfit_corpus() { return corpus::generate_synthetic_corpus(20, 20); }

void criterion7_overfit() {
  Criterion c(7, "overfit harness: training metric < 0.05 within 500 epochs");
  auto data = overfit_corpus();
  auto run_one = [&](models::Arch arch, const char* what) {
    auto start = std::chrono::steady_clock::now();
    models::ModelConfig cfg = models::ModelConfig::defaults(arch);
    cfg.seed = 7;
    cfg.optimizer.lr = 3e-3;
    cfg.batch_size = 5;
    cfg.epochs = 500;
    cfg.patience = 500;
    auto model = models::build_model(cfg, models::Vocab::build(data));
    models::TrainOptions opts = models::TrainOptions::from_config(cfg);
    opts.stop_below_valid = 0.05;  // validation corpus == training corpus
    auto result = models::train_model(*model, data, data, opts);
    double took = elapsed_s(start);
    c.check(result.best_valid < 0.05,
            std::string(what) + " best training metric " + std::to_string(result.best_valid));
    c.check(result.history.size() <= 500, std::string(what) + " exceeded 500 epochs");
    c.check(took < 300.0, std::string(what) + " runtime " + std::to_string(took) + "s");
    c.note(std::string(what) + " reached " + std::to_string(result.best_valid) + " in " +
           std::to_string(result.history.size()) + " epochs");
  };
  run_one(models::Arch::HcnnLstm, "hcnn-lstm jsd");
  run_one(models::Arch::MeHGCNN, "mehgcnn nmd");
}

struct BaselineSplit {
  corpus::Corpus train, valid, test;
};

BaselineSplit baseline_corpus() {
  auto all = corpus::generate_synthetic_corpus(88, 200);
  auto split = corpus::split_corpus(all, {0.7, 0.15, 0.15}, 9);
  return {std::move(split.train), std::move(split.valid), std::move(split.test)};
}

void criterion8_baseline_ordering() {
  Criterion c(8, "trained models beat both baselines on the synthetic test split");
  auto data = baseline_corpus();
  auto uniform = baselines::predict_uniform_corpus(data.test);
  auto popularity = baselines::predict_popularity_corpus(baselines::fit_popularity(data.train),
                                                         data.test);

  {
    models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::HcnnLstm);
    cfg.seed = 3;
    cfg.optimizer.lr = 3e-3;
    cfg.epochs = 40;
    cfg.batch_size = 8;
    auto model = models::build_model(cfg, models::Vocab::build(data.train));
    models::train_model(*model, data.train, data.valid, models::TrainOptions::from_config(cfg));
    auto preds = models::predict_corpus(*model, data.test);
    double model_jsd = metrics::evaluate_nd_run(data.test, preds).mean_jsd;
    double uni_jsd = metrics::evaluate_nd_run(data.test, uniform).mean_jsd;
    double pop_jsd = metrics::evaluate_nd_run(data.test, popularity).mean_jsd;
    c.check(model_jsd < uni_jsd, "nd not below uniform");
    c.check(model_jsd < pop_jsd, "nd not below popularity");
    c.note("nd jsd " + std::to_string(model_jsd) + " vs uniform " + std::to_string(uni_jsd) +
           ", popularity " + std::to_string(pop_jsd));
  }
  {
    models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::MeHGCNN);
    cfg.seed = 3;
    cfg.optimizer.lr = 3e-3;
    cfg.epochs = 40;
    cfg.batch_size = 8;
    auto model = models::build_model(cfg, models::Vocab::build(data.train));
    models::train_model(*model, data.train, data.valid, models::TrainOptions::from_config(cfg));
    auto preds = models::predict_corpus(*model, data.test);
    auto mean_nmd = [&](const corpus::PredictionSet& p) {
      auto run = metrics::evaluate_dq_run(data.test, p);
      return (run.mean_nmd[0] + run.mean_nmd[1] + run.mean_nmd[2]) / 3.0;
    };
    double model_nmd = mean_nmd(preds);
    double uni_nmd = mean_nmd(uniform);
    double pop_nmd = mean_nmd(popularity);
    c.check(model_nmd < uni_nmd, "dq not below uniform");
    c.check(model_nmd < pop_nmd, "dq not below popularity");
    c.note("dq nmd " + std::to_string(model_nmd) + " vs uniform " + std::to_string(uni_nmd) +
           ", popularity " + std::to_string(pop_nmd));
  }
}

void criterion9_learning_curve() {
  Criterion c(9, "median test JSD non-increasing across fractions {0.25, 0.5, 1.0}");
  auto data = baseline_corpus();
  models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::HcnnLstm);
  cfg.optimizer.lr = 3e-3;
  cfg.epochs = 25;
  cfg.batch_size = 8;
  models::TrainOptions opts = models::TrainOptions::from_config(cfg);
  auto points =
      models::learning_curve(cfg, data.train, data.test, {0.25, 0.5, 1.0}, {1, 2, 3}, opts);
  auto medians = models::curve_medians(points);
  std::string shown;
  for (const auto& [f, m] : medians) {
    shown += (shown.empty() ? "" : " -> ") + std::to_string(m);
  }
  c.note("medians " + shown);
  for (std::size_t i = 1; i < medians.size(); ++i) {
    c.check(medians[i].second <= medians[i - 1].second,
            "median rose between fractions " + std::to_string(medians[i - 1].first) + " and " +
                std::to_string(medians[i].first));
  }
}

void criterion10_classical_oracle() {
  Criterion c(10, "classical evaluation equals brute-force recomputation on 1,000 pairs");
  Rng rng(1010);
  std::vector<ArgmaxSet> gold_sets;
  std::vector<std::size_t> predicted;
  for (int i = 0; i < 1000; ++i) {
    // Random gold distribution over a random speaker's labels.
    Speaker s = rng.bernoulli(0.5) ? Speaker::Customer : Speaker::Helpdesk;
    std::size_t begin = s == Speaker::Customer ? kCustomerNuggetBegin : kHelpdeskNuggetBegin;
    std::size_t end = s == Speaker::Customer ? kCustomerNuggetEnd : kHelpdeskNuggetEnd;
    std::vector<double> mass(kNuggetCount, 0.0);
    // Quantized votes so ties happen often.
    std::size_t votes = 6;
    for (std::size_t v = 0; v < votes; ++v) mass[begin + rng.uniform_index(end - begin)] += 1.0;
    gold_sets.push_back(argmax_set(ProbabilityBins(BinDomain::nuggets(), mass)));
    predicted.push_back(begin + rng.uniform_index(end - begin));
  }

  // Brute force, written independently over plain counters.
  std::size_t correct = 0;
  std::size_t table[kNuggetCount][kNuggetCount] = {};
  for (std::size_t i = 0; i < gold_sets.size(); ++i) {
    bool inside = false;
    for (std::size_t g : gold_sets[i].indices) inside = inside || g == predicted[i];
    if (inside) ++correct;
    std::size_t truth = inside ? predicted[i] : gold_sets[i].indices.front();
    ++table[predicted[i]][truth];
  }
  double expected_acc = double(correct) / double(gold_sets.size());

  double got_acc = classical::multi_gold_accuracy(gold_sets, predicted);
  c.check(got_acc == expected_acc, "multi-gold accuracy mismatch");

  auto m = classical::confusion_matrix(gold_sets, predicted);
  bool counts_equal = true;
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    for (std::size_t j = 0; j < kNuggetCount; ++j) {
      counts_equal = counts_equal && m.counts[i][j] == table[i][j];
    }
  }
  c.check(counts_equal, "confusion counts mismatch");
  c.check(m.total() == gold_sets.size(), "confusion total != scored utterances");

  auto prf = classical::prf_from_confusion(m);
  c.check(prf.accuracy == double(m.trace()) / double(m.total()), "accuracy != trace/total");
  double worst = 0.0;
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < kNuggetCount; ++j) {
      row += table[i][j];
      col += table[j][i];
    }
    double p = row ? double(table[i][i]) / row : 0.0;
    double r = col ? double(table[i][i]) / col : 0.0;
    double f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
    worst = std::max({worst, std::abs(p - prf.precision[i]), std::abs(r - prf.recall[i]),
                      std::abs(f - prf.f1[i])});
  }
  c.check(worst == 0.0, "per-label P/R/F mismatch " + std::to_string(worst));

  // Multi-gold accuracy is never below plain first-gold accuracy.
  std::size_t plain = 0;
  for (std::size_t i = 0; i < gold_sets.size(); ++i) {
    if (predicted[i] == gold_sets[i].indices.front()) ++plain;
  }
  c.check(got_acc >= double(plain) / double(gold_sets.size()),
          "multi-gold accuracy below plain accuracy");
}

void criterion11_determinism() {
  Criterion c(11, "commands rerun with an equal manifest are byte-identical");
  auto dir = fs::temp_directory_path() / "nb_accept_cli";
  fs::create_directories(dir);
  auto P = [&](const char* n) { return (dir / n).string(); };

  bool ok = run_cli("synth --seed 5 --n 18 --out " + P("c.json")) == 0;
  ok = ok && run_cli("split --in " + P("c.json") + " --fractions 0.6,0.2,0.2 --seed 2 " +
                     "--out-prefix " + P("s")) == 0;
  std::string train_cmd = "train --arch hcnn-lstm --train " + P("s.train.json") + " --valid " +
                          P("s.valid.json") + " --epochs 2 --seed 9 --out " + P("m.ckpt") +
                          " --history " + P("h.csv");
  ok = ok && run_cli(train_cmd) == 0;
  std::string predict_cmd =
      "predict --model " + P("m.ckpt") + " --in " + P("s.test.json") + " --out " + P("p.json");
  ok = ok && run_cli(predict_cmd) == 0;
  std::string eval_cmd = "eval-nd --gold " + P("s.test.json") + " --pred " + P("p.json") +
                         " --out " + P("r.json");
  ok = ok && run_cli(eval_cmd) == 0;
  std::string cls_cmd = "classical --gold " + P("s.test.json") + " --pred " + P("p.json") +
                        " --out " + P("cls.json");
  ok = ok && run_cli(cls_cmd) == 0;
  c.check(ok, "pipeline commands failed");
  if (ok) {
    std::map<std::string, std::string> first;
    for (const char* n : {"c.json", "s.train.json", "m.ckpt", "m.ckpt.json", "h.csv", "p.json",
                          "r.json", "r.csv", "cls.json", "cls.prf.csv"}) {
      first[n] = slurp(P(n));
    }
    bool rerun_ok = run_cli("synth --seed 5 --n 18 --out " + P("c.json")) == 0 &&
                    run_cli("split --in " + P("c.json") +
                            " --fractions 0.6,0.2,0.2 --seed 2 --out-prefix " + P("s")) == 0 &&
                    run_cli(train_cmd) == 0 && run_cli(predict_cmd) == 0 &&
                    run_cli(eval_cmd) == 0 && run_cli(cls_cmd) == 0;
    c.check(rerun_ok, "rerun failed");
    for (const auto& [name, content] : first) {
      c.check(slurp(P(name.c_str())) == content, name + " bytes changed across reruns");
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
}

void criterion12_ablations() {
  Criterion c(12, "ablation variants constructible with exact parameter-count deltas");
  auto tiny = corpus::generate_synthetic_corpus(12, 4);
  models::Vocab vocab = models::Vocab::build(tiny);

  {
    models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::MeHGCNN);
    cfg.embed_dim = 10;
    cfg.conv_channels = 6;
    cfg.context_channels = 5;
    cfg.k_max = 4;
    const std::size_t C = cfg.conv_channels, D = cfg.embed_dim, X = cfg.context_channels;
    const std::size_t full = models::MeHGCNN(cfg, vocab).parameter_count();

    auto variant = [&](auto mutate) {
      models::ModelConfig v = cfg;
      mutate(v);
      return models::MeHGCNN(v, vocab).parameter_count();
    };
    std::size_t gate_params = (cfg.utter_width * D * C + C) + (cfg.utter_width * C * C + C) +
                              (3 * (C + 9) * X + X);
    c.check(full - variant([](auto& v) { v.gating = false; }) == gate_params,
            "dq w/o gating delta");
    std::size_t one_gru = 3 * (X * X + X * X + X);
    c.check(full - variant([](auto& v) { v.memory = false; }) == 4 * one_gru,
            "dq w/o memory delta");
    c.check(full - variant([](auto& v) { v.nugget_feature = false; }) == 2ull * 3 * 7 * X,
            "dq w/o nuggets delta");
    c.check(full - variant([](auto& v) { v.multi_stack = false; }) ==
                2 * (cfg.utter_width * C * C + C),
            "dq single-stack delta");
  }
  {
    models::ModelConfig cfg = models::ModelConfig::defaults(models::Arch::HcnnLstm);
    cfg.embed_dim = 10;
    cfg.conv_channels = 6;
    cfg.context_channels = 5;
    const std::size_t C = cfg.conv_channels, D = cfg.embed_dim, X = cfg.context_channels;
    const std::size_t full = models::HcnnLstm(cfg, vocab).parameter_count();
    auto variant = [&](auto mutate) {
      models::ModelConfig v = cfg;
      mutate(v);
      return models::HcnnLstm(v, vocab).parameter_count();
    };
    std::size_t later_stack =
        (cfg.nd_width_a * 2 * C * C + C) + (cfg.nd_width_b * 2 * C * C + C);
    c.check(full - variant([](auto& v) { v.multi_stack = false; }) == 2 * later_stack,
            "nd w/o multi-stack delta");
    std::size_t stack0 = (cfg.nd_width_a * D * C + C) + (cfg.nd_width_b * D * C + C);
    c.check(variant([](auto& v) { v.gating = true; }) - full == stack0 + 2 * later_stack,
            "nd w/ gating delta");
    std::size_t one_gru = 3 * (X * X + X * X + X);
    c.check(variant([](auto& v) { v.memory = true; }) - full == 4 * one_gru,
            "nd w/ memory delta");
    // Masking changes no parameters, only the head's support.
    c.check(variant([](auto& v) { v.role_masking = false; }) == full, "masking is param-free");
  }
}

}  // namespace

int main(int argc, char** argv) {
  bin_path = NUGGETBENCH_BIN;
  (void)argc;
  (void)argv;
  std::printf("acceptance suite\n");
  criterion1_worked_values();
  criterion2_axioms();
  criterion3_transport_oracle();
  criterion4_expansion();
  criterion5_quantization();
  criterion6_gradient_checks();
  criterion7_overfit();
  criterion8_baseline_ordering();
  criterion9_learning_curve();
  criterion10_classical_oracle();
  criterion11_determinism();
  criterion12_ablations();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
