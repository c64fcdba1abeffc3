#include "nuggetbench/models/train.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "nuggetbench/core/clock.hpp"
#include "nuggetbench/core/parallel.hpp"
#include "nuggetbench/core/rng.hpp"
#include "nuggetbench/core/summation.hpp"
#include "nuggetbench/metrics/run_eval.hpp"
#include "nuggetbench/tk/ops.hpp"
#include "nuggetbench/tk/optim.hpp"

namespace nb::models {

namespace {
constexpr std::uint64_t kShuffleSalt = 0xd1b54a32d192ed03ULL;
}

corpus::PredictionSet predict_corpus(Model& model, const corpus::Corpus& corpus,
                                     std::size_t threads) {
  std::vector<corpus::PredictedDialogue> rows(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) { rows[i] = model.predict(corpus[i]); });
  corpus::PredictionSet preds;
  for (auto& r : rows) preds.insert(std::move(r));
  return preds;
}

double validation_metric(Model& model, const corpus::Corpus& corpus, std::size_t threads) {
  if (corpus.empty()) return 0.0;
  corpus::PredictionSet preds = predict_corpus(model, corpus, threads);
  if (model.config().arch == Arch::MeHGCNN) {
    auto run = metrics::evaluate_dq_run(corpus, preds, {.threads = threads});
    KahanSum s;
    for (std::size_t m = 0; m < kMeasureCount; ++m) s.add_counted(run.mean_nmd[m]);
    return s.mean();
  }
  auto run = metrics::evaluate_nd_run(corpus, preds, {.threads = threads});
  return run.mean_jsd;
}

TrainResult train_model(Model& model, const corpus::Corpus& train, const corpus::Corpus& valid,
                        const TrainOptions& options) {
  if (train.empty()) throw ValidationError("training corpus is empty");
  if (options.batch_size == 0 || options.epochs == 0) {
    throw ConfigError("batch size and epochs must be positive");
  }

  std::vector<tk::Var> params = model.parameters();
  tk::Adam optimizer(params, options.adam);
  Rng shuffle_rng(options.seed ^ kShuffleSalt);
  std::atomic<std::uint64_t> clamp_events{0};

  TrainResult result;
  double best = std::numeric_limits<double>::infinity();
  std::vector<tk::Tensor> best_params;
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    Stopwatch watch;
    shuffle_rng.shuffle(order);
    KahanSum epoch_loss;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      optimizer.zero_grad();
      tk::Var batch_loss;
      for (std::size_t i = start; i < end; ++i) {
        tk::Var l = model.dialogue_loss(train[order[i]], &clamp_events);
        batch_loss = i == start ? l : tk::add(batch_loss, l);
      }
      batch_loss = tk::scale(batch_loss, 1.0 / static_cast<double>(end - start));
      const double loss_value = batch_loss->value.data()[0];
      if (!std::isfinite(loss_value)) {
        throw NumericError("training diverged: non-finite loss at epoch " +
                           std::to_string(epoch));
      }
      epoch_loss.add(loss_value * static_cast<double>(end - start));
      tk::backward(batch_loss);
      optimizer.step();
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss.value() / static_cast<double>(train.size());
    rec.valid_metric = validation_metric(model, valid, options.threads);
    rec.wall_seconds = watch.seconds();
    result.history.push_back(rec);
    if (options.log_progress) {
      std::fprintf(stderr, "epoch %zu  loss %.6f  valid %.6f\n", epoch, rec.train_loss,
                   rec.valid_metric);
    }

    if (rec.valid_metric < best - 1e-12) {
      best = rec.valid_metric;
      result.best_epoch = epoch;
      best_params.clear();
      for (const auto& p : params) best_params.push_back(p->value);
      since_best = 0;
    } else {
      ++since_best;
    }
    if (options.stop_below_valid && rec.valid_metric < *options.stop_below_valid) break;
    if (since_best > options.patience) break;
  }

  if (!best_params.empty()) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_params[i];
  }
  result.best_valid = best;
  result.clamp_events = clamp_events.load();
  return result;
}

std::string history_csv(const TrainResult& result) {
  std::ostringstream out;
  out << "epoch,train_loss,valid_metric,wall_seconds\n";
  char buf[128];
  for (const auto& r : result.history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.3f\n", r.epoch, r.train_loss,
                  r.valid_metric, r.wall_seconds);
    out << buf;
  }
  return out.str();
}

}  // namespace nb::models
