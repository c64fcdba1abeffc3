// Batch front end: corpus validation and synthesis, splits, model training
// and prediction, distribution-metric evaluation, classical tables, and
// learning curves. One command per process; outputs are written atomically.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nuggetbench/baselines/baselines.hpp"
#include "nuggetbench/classical/classical.hpp"
#include "nuggetbench/core/log.hpp"
#include "nuggetbench/core/parallel.hpp"
#include "nuggetbench/corpus/json_io.hpp"
#include "nuggetbench/corpus/split.hpp"
#include "nuggetbench/corpus/synthetic.hpp"
#include "nuggetbench/metrics/run_eval.hpp"
#include "nuggetbench/models/curve.hpp"
#include "nuggetbench/models/mehgcnn.hpp"
#include "nuggetbench/models/train.hpp"
#include "nuggetbench/report/report.hpp"

namespace {

using namespace nb;

std::vector<double> parse_fraction_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad fraction '" + item + "' in '" + csv + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty fraction list '" + csv + "'");
  return out;
}

std::string csv_path_for(const std::string& json_path) {
  auto dot = json_path.rfind('.');
  if (dot == std::string::npos || json_path.substr(dot) != ".json") return json_path + ".csv";
  return json_path.substr(0, dot) + ".csv";
}

struct CommonFlags {
  std::size_t threads = 1;
  std::string format = "both";  // json|csv|both
};

void emit_eval_outputs(const std::string& out_path, const std::string& format,
                       const std::string& json_text, const std::string& csv_text) {
  if (format == "json" || format == "both") report::atomic_write(out_path, json_text);
  if (format == "csv" || format == "both") {
    report::atomic_write(csv_path_for(out_path), csv_text);
  }
}

// One JSON config holds model/training options; flags win over the file.
models::ModelConfig resolve_model_config(const std::string& config_path, const std::string& arch,
                                         const std::optional<std::uint64_t>& seed,
                                         const std::optional<std::size_t>& epochs,
                                         const std::optional<std::size_t>& batch_size,
                                         const std::optional<double>& lr,
                                         const std::optional<std::size_t>& patience) {
  models::ModelConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config '" + config_path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!arch.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(config_path + ": " + e.what());
      }
      j["arch"] = arch;
      text = j.dump();
    }
    cfg = models::ModelConfig::from_json(text);
  } else {
    cfg = models::ModelConfig::defaults(arch.empty() ? models::Arch::HcnnLstm
                                                     : models::parse_arch(arch));
  }
  if (seed) cfg.seed = *seed;
  if (epochs) cfg.epochs = *epochs;
  if (batch_size) cfg.batch_size = *batch_size;
  if (lr) cfg.optimizer.lr = *lr;
  if (patience) cfg.patience = *patience;
  cfg.validate();
  return cfg;
}

int run_validate(const std::string& in, const std::string& out) {
  std::vector<corpus::Finding> findings;
  try {
    auto result = corpus::parse_corpus_lenient(in);
    findings = std::move(result.findings);
  } catch (const Error& e) {
    findings.push_back({corpus::Finding::Severity::Error, "-", e.what()});
  }
  std::string text = report::findings_report(findings);
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    report::atomic_write(out, text);
  }
  for (const auto& f : findings) {
    if (f.severity == corpus::Finding::Severity::Error) return 1;
  }
  return 0;
}

void run_synth(std::uint64_t seed, std::size_t n, const std::string& out,
               const std::string& config_path) {
  corpus::SynthConfig cfg;
  if (!config_path.empty()) cfg = corpus::synth_config_from_json_file(config_path);
  auto corpus_data = corpus::generate_synthetic_corpus(seed, n, cfg);
  report::atomic_write(out, corpus::serialize_corpus(corpus_data));
  log_info("wrote " + std::to_string(corpus_data.size()) + " dialogues to " + out);
}

void run_split(const std::string& in, const std::string& fractions_csv, std::uint64_t seed,
               const std::string& prefix) {
  auto fractions = parse_fraction_list(fractions_csv);
  if (fractions.size() != 3) {
    throw ConfigError("--fractions needs exactly three values (train,valid,test)");
  }
  auto corpus_data = corpus::parse_corpus(in);
  auto split =
      corpus::split_corpus(corpus_data, {fractions[0], fractions[1], fractions[2]}, seed);
  report::atomic_write(prefix + ".train.json", corpus::serialize_corpus(split.train));
  report::atomic_write(prefix + ".valid.json", corpus::serialize_corpus(split.valid));
  report::atomic_write(prefix + ".test.json", corpus::serialize_corpus(split.test));
  log_info("split " + std::to_string(corpus_data.size()) + " dialogues into " +
           std::to_string(split.train.size()) + "/" + std::to_string(split.valid.size()) + "/" +
           std::to_string(split.test.size()));
}

void run_train(const models::ModelConfig& cfg, const std::string& train_path,
               const std::string& valid_path, const std::string& out,
               const std::string& history_path, const std::string& embeddings_path,
               std::size_t threads, std::optional<double> stop_below) {
  auto train_corpus = corpus::parse_corpus(train_path);
  auto valid_corpus = valid_path.empty() ? train_corpus : corpus::parse_corpus(valid_path);

  auto model = models::build_model(cfg, models::Vocab::build(train_corpus));
  if (!embeddings_path.empty()) {
    auto* embed = model->parameters().front().get();
    std::size_t applied =
        models::load_pretrained_embeddings(embeddings_path, model->vocab(), embed->value);
    log_info("applied " + std::to_string(applied) + " pretrained embedding rows");
  }

  models::TrainOptions opts = models::TrainOptions::from_config(cfg);
  opts.threads = threads;
  opts.stop_below_valid = stop_below;
  opts.log_progress = log_level() <= LogLevel::Info;
  auto result = models::train_model(*model, train_corpus, valid_corpus, opts);
  if (result.clamp_events > 0) {
    log_warn("cross-entropy clamped " + std::to_string(result.clamp_events) +
             " zero predictions");
  }

  models::save_model(*model, out);
  if (!history_path.empty()) {
    report::atomic_write(history_path, models::history_csv(result));
  }
  log_info("best validation metric " + std::to_string(result.best_valid) + " at epoch " +
           std::to_string(result.best_epoch));
}

void run_predict(const std::string& model_path, const std::string& baseline,
                 const std::string& fit_path, const std::string& in, const std::string& out,
                 const std::string& nugget_model_path, std::size_t threads) {
  auto input = corpus::parse_corpus(in);
  corpus::PredictionSet preds;
  if (!baseline.empty()) {
    if (baseline == "uniform") {
      preds = baselines::predict_uniform_corpus(input);
    } else if (baseline == "popularity") {
      if (fit_path.empty()) throw ConfigError("--baseline popularity needs --fit TRAIN_CORPUS");
      auto train_corpus = corpus::parse_corpus(fit_path);
      preds = baselines::predict_popularity_corpus(baselines::fit_popularity(train_corpus), input);
    } else {
      throw ConfigError("unknown baseline '" + baseline + "' (popularity or uniform)");
    }
  } else if (!model_path.empty()) {
    auto model = models::load_model(model_path);
    if (!nugget_model_path.empty()) {
      if (model->config().arch != models::Arch::MeHGCNN) {
        throw ConfigError("--nugget-model applies only to the quality model");
      }
      auto nd_model = models::load_model(nugget_model_path);
      if (nd_model->config().arch != models::Arch::HcnnLstm) {
        throw ConfigError("--nugget-model must point at a nugget-detection checkpoint");
      }
      auto* dq = dynamic_cast<models::MeHGCNN*>(model.get());
      std::vector<corpus::PredictedDialogue> rows(input.size());
      parallel_for(input.size(), threads, [&](std::size_t i) {
        auto nd_pred = nd_model->predict(input[i]);
        rows[i] = dq->predict(input[i], &nd_pred.nuggets);
      });
      for (auto& r : rows) preds.insert(std::move(r));
    } else {
      preds = models::predict_corpus(*model, input, threads);
    }
  } else {
    throw ConfigError("predict needs --model or --baseline");
  }
  report::atomic_write(out, corpus::serialize_predictions(preds));
}

void run_eval_dq(const std::string& gold_path, const std::string& pred_path,
                 const std::string& out, const CommonFlags& flags) {
  auto gold = corpus::parse_corpus(gold_path);
  auto preds = corpus::parse_predictions(pred_path);
  auto run = metrics::evaluate_dq_run(gold, preds, {.threads = flags.threads});
  auto manifest = report::make_manifest("eval-dq", 0);
  manifest.add_input(gold_path);
  manifest.add_input(pred_path);
  emit_eval_outputs(out, flags.format, report::dq_report_json(manifest, run),
                    report::dq_report_csv(run));
}

void run_eval_nd(const std::string& gold_path, const std::string& pred_path,
                 const std::string& out, const std::string& aggregation,
                 const CommonFlags& flags) {
  auto gold = corpus::parse_corpus(gold_path);
  auto preds = corpus::parse_predictions(pred_path);
  metrics::EvalOptions opts;
  opts.threads = flags.threads;
  if (aggregation == "per-dialogue") {
    opts.nd_aggregation = metrics::NdAggregation::PerDialogueThenRun;
  } else if (aggregation != "flat") {
    throw ConfigError("--aggregation must be flat or per-dialogue");
  }
  auto run = metrics::evaluate_nd_run(gold, preds, opts);
  auto manifest = report::make_manifest("eval-nd", 0);
  manifest.add_input(gold_path);
  manifest.add_input(pred_path);
  emit_eval_outputs(out, flags.format, report::nd_report_json(manifest, run),
                    report::nd_report_csv(run));
}

void run_classical(const std::string& gold_path, const std::string& pred_path,
                   const std::string& out, const CommonFlags& flags) {
  auto gold = corpus::parse_corpus(gold_path);
  auto preds = corpus::parse_predictions(pred_path);

  report::ClassicalReport rep;
  bool any_nuggets = false;
  bool any_quality = false;
  for (const auto& d : gold) {
    const auto* p = preds.find(d.id);
    if (p && !p->nuggets.empty() && !p->nuggets.front().empty()) any_nuggets = true;
    if (p && p->quality) any_quality = true;
  }
  if (any_nuggets) {
    auto labels = classical::collect_nd_labels(gold, preds);
    rep.confusion = classical::confusion_matrix(labels.gold_sets, labels.predicted);
    rep.prf = classical::prf_from_confusion(rep.confusion);
    rep.multi_gold_accuracy = classical::multi_gold_accuracy(labels.gold_sets, labels.predicted);
    rep.tie_gap = classical::tie_gap_table(gold);
    rep.expansion = classical::expansion_statistics(gold);
    rep.has_nd = true;
  }
  if (any_quality) {
    rep.dq_accuracy = classical::dq_classification_eval(gold, preds);
    rep.has_dq = true;
  }
  if (!rep.has_nd && !rep.has_dq) {
    throw ValidationError("predictions carry neither nugget nor quality distributions");
  }

  auto manifest = report::make_manifest("classical", 0);
  manifest.add_input(gold_path);
  manifest.add_input(pred_path);
  if (flags.format == "json" || flags.format == "both") {
    report::atomic_write(out, report::classical_report_json(manifest, rep));
  }
  if (flags.format == "csv" || flags.format == "both") {
    std::string stem = out;
    auto dot = stem.rfind(".json");
    if (dot != std::string::npos && dot == stem.size() - 5) stem = stem.substr(0, dot);
    if (rep.has_nd) {
      report::atomic_write(stem + ".confusion.csv", report::confusion_csv(rep.confusion));
      report::atomic_write(stem + ".prf.csv", report::prf_csv(rep.prf));
      report::atomic_write(stem + ".tiegap.csv", report::tie_gap_csv(rep.tie_gap));
      report::atomic_write(stem + ".expansion.csv", report::expansion_csv(rep.expansion));
    }
    if (rep.has_dq) {
      report::atomic_write(stem + ".dq_accuracy.csv", report::dq_accuracy_csv(rep.dq_accuracy));
    }
  }
}

void run_curve(const models::ModelConfig& cfg, const std::string& train_path,
               const std::string& test_path, const std::string& fractions_csv,
               std::uint64_t seed, std::size_t n_seeds, const std::string& out,
               std::size_t threads) {
  auto train_corpus = corpus::parse_corpus(train_path);
  auto test_corpus = corpus::parse_corpus(test_path);
  auto fractions = parse_fraction_list(fractions_csv);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < n_seeds; ++i) seeds.push_back(seed + i);
  models::TrainOptions opts = models::TrainOptions::from_config(cfg);
  opts.threads = threads;
  auto points = models::learning_curve(cfg, train_corpus, test_corpus, fractions, seeds, opts);
  report::atomic_write(out, models::curve_csv(points));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialogue quality / nugget detection evaluation toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // validate
  std::string v_in, v_out;
  auto* validate = app.add_subcommand("validate", "check a corpus file and report findings");
  validate->add_option("--in", v_in, "corpus file")->required();
  validate->add_option("--out", v_out, "findings file (stdout when omitted)");
  validate->callback([&] { exit_code = run_validate(v_in, v_out); });

  // synth
  std::uint64_t s_seed = 1;
  std::size_t s_n = 0;
  std::string s_out, s_config;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--seed", s_seed, "generator seed");
  synth->add_option("--n", s_n, "number of dialogues")->required();
  synth->add_option("--out", s_out, "output corpus file")->required();
  synth->add_option("--config", s_config, "generator config JSON");
  synth->callback([&] { run_synth(s_seed, s_n, s_out, s_config); });

  // split
  std::string sp_in, sp_fractions = "0.8,0.1,0.1", sp_prefix;
  std::uint64_t sp_seed = 1;
  auto* split = app.add_subcommand("split", "split a corpus into train/valid/test");
  split->add_option("--in", sp_in, "corpus file")->required();
  split->add_option("--fractions", sp_fractions, "train,valid,test fractions");
  split->add_option("--seed", sp_seed, "shuffle seed");
  split->add_option("--out-prefix", sp_prefix, "output path prefix")->required();
  split->callback([&] { run_split(sp_in, sp_fractions, sp_seed, sp_prefix); });

  // shared model-config flags
  struct TrainFlags {
    std::string arch, config, train, valid, out, history, embeddings;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs, batch_size, patience;
    std::optional<double> lr, stop_below;
    std::size_t threads = 1;
  } tf;
  auto* train = app.add_subcommand("train", "train a model");
  train->add_option("--arch", tf.arch, "mehgcnn or hcnn-lstm");
  train->add_option("--config", tf.config, "model/training config JSON");
  train->add_option("--train", tf.train, "training corpus")->required();
  train->add_option("--valid", tf.valid, "validation corpus (defaults to the training corpus)");
  train->add_option("--out", tf.out, "model checkpoint path")->required();
  train->add_option("--history", tf.history, "training history CSV");
  train->add_option("--embeddings", tf.embeddings, "pretrained word vectors (text format)");
  train->add_option("--seed", tf.seed, "seed override");
  train->add_option("--epochs", tf.epochs, "epoch override");
  train->add_option("--batch-size", tf.batch_size, "batch-size override");
  train->add_option("--patience", tf.patience, "early-stopping patience override");
  train->add_option("--lr", tf.lr, "learning-rate override");
  train->add_option("--stop-below", tf.stop_below, "stop once the validation metric drops below");
  train->add_option("--threads", tf.threads, "validation worker threads");
  train->callback([&] {
    auto cfg = resolve_model_config(tf.config, tf.arch, tf.seed, tf.epochs, tf.batch_size, tf.lr,
                                    tf.patience);
    run_train(cfg, tf.train, tf.valid, tf.out, tf.history, tf.embeddings, tf.threads,
              tf.stop_below);
  });

  // predict
  std::string p_model, p_baseline, p_fit, p_in, p_out, p_nugget_model;
  std::size_t p_threads = 1;
  auto* predict = app.add_subcommand("predict", "predict with a model or baseline");
  auto* model_opt = predict->add_option("--model", p_model, "model checkpoint");
  predict->add_option("--baseline", p_baseline, "popularity or uniform")->excludes(model_opt);
  predict->add_option("--fit", p_fit, "training corpus for the popularity baseline");
  predict->add_option("--in", p_in, "input corpus")->required();
  predict->add_option("--out", p_out, "prediction file")->required();
  predict->add_option("--nugget-model", p_nugget_model,
                      "substitute this nugget model's predictions as quality-model features");
  predict->add_option("--threads", p_threads, "worker threads");
  predict->callback(
      [&] { run_predict(p_model, p_baseline, p_fit, p_in, p_out, p_nugget_model, p_threads); });

  // eval-dq
  std::string dq_gold, dq_pred, dq_out;
  CommonFlags dq_flags;
  auto* eval_dq = app.add_subcommand("eval-dq", "score quality predictions (NMD, RSNOD)");
  eval_dq->add_option("--gold", dq_gold, "gold corpus")->required();
  eval_dq->add_option("--pred", dq_pred, "prediction file")->required();
  eval_dq->add_option("--out", dq_out, "report path (.json)")->required();
  eval_dq->add_option("--format", dq_flags.format, "json, csv, or both");
  eval_dq->add_option("--threads", dq_flags.threads, "worker threads");
  eval_dq->callback([&] { run_eval_dq(dq_gold, dq_pred, dq_out, dq_flags); });

  // eval-nd
  std::string nd_gold, nd_pred, nd_out, nd_aggregation = "flat";
  CommonFlags nd_flags;
  auto* eval_nd = app.add_subcommand("eval-nd", "score nugget predictions (JSD, RNSS)");
  eval_nd->add_option("--gold", nd_gold, "gold corpus")->required();
  eval_nd->add_option("--pred", nd_pred, "prediction file")->required();
  eval_nd->add_option("--out", nd_out, "report path (.json)")->required();
  eval_nd->add_option("--aggregation", nd_aggregation, "flat or per-dialogue");
  eval_nd->add_option("--format", nd_flags.format, "json, csv, or both");
  eval_nd->add_option("--threads", nd_flags.threads, "worker threads");
  eval_nd->callback([&] { run_eval_nd(nd_gold, nd_pred, nd_out, nd_aggregation, nd_flags); });

  // classical
  std::string c_gold, c_pred, c_out;
  CommonFlags c_flags;
  auto* classical_cmd = app.add_subcommand(
      "classical", "one-hot conversion tables: confusion, P/R/F, tie gaps, accuracy");
  classical_cmd->add_option("--gold", c_gold, "gold corpus")->required();
  classical_cmd->add_option("--pred", c_pred, "prediction file")->required();
  classical_cmd->add_option("--out", c_out, "report path (.json; CSVs use the same stem)")
      ->required();
  classical_cmd->add_option("--format", c_flags.format, "json, csv, or both");
  classical_cmd->add_option("--threads", c_flags.threads, "worker threads");
  classical_cmd->callback([&] { run_classical(c_gold, c_pred, c_out, c_flags); });

  // curve
  struct CurveFlags {
    std::string arch, config, train, test, fractions, out;
    std::uint64_t seed = 1;
    std::size_t n_seeds = 1;
    std::optional<std::size_t> epochs;
    std::optional<std::uint64_t> cfg_seed;
    std::size_t threads = 1;
  } cf;
  auto* curve = app.add_subcommand("curve", "learning curve over training-set fractions");
  curve->add_option("--arch", cf.arch, "mehgcnn or hcnn-lstm");
  curve->add_option("--config", cf.config, "model/training config JSON");
  curve->add_option("--train", cf.train, "training corpus")->required();
  curve->add_option("--test", cf.test, "test corpus")->required();
  curve->add_option("--fractions", cf.fractions, "comma-separated fractions in (0,1]")
      ->required();
  curve->add_option("--seed", cf.seed, "first seed");
  curve->add_option("--n-seeds", cf.n_seeds, "number of seeds (seed, seed+1, ...)");
  curve->add_option("--epochs", cf.epochs, "epoch override");
  curve->add_option("--out", cf.out, "plot-ready CSV path")->required();
  curve->add_option("--threads", cf.threads, "worker threads");
  curve->callback([&] {
    auto cfg = resolve_model_config(cf.config, cf.arch, cf.cfg_seed, cf.epochs, std::nullopt,
                                    std::nullopt, std::nullopt);
    run_curve(cfg, cf.train, cf.test, cf.fractions, cf.seed, cf.n_seeds, cf.out, cf.threads);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const nb::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
