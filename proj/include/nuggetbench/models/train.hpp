#pragma once

#include <optional>

#include "nuggetbench/models/model.hpp"

namespace nb::models {

struct TrainOptions {
  std::size_t batch_size = 8;
  std::size_t epochs = 100;
  std::size_t patience = 10;
  tk::AdamConfig adam;
  std::uint64_t seed = 42;
  // Early exit once the validation metric drops below this target.
  std::optional<double> stop_below_valid;
  std::size_t threads = 1;
  bool log_progress = false;

  static TrainOptions from_config(const ModelConfig& cfg) {
    TrainOptions o;
    o.batch_size = cfg.batch_size;
    o.epochs = cfg.epochs;
    o.patience = cfg.patience;
    o.adam = cfg.optimizer;
    o.seed = cfg.seed;
    return o;
  }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;    // mean per-dialogue loss
  double valid_metric = 0.0;  // mean NMD (quality) or mean JSD (nuggets)
  double wall_seconds = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_valid = 0.0;
  std::uint64_t clamp_events = 0;
};

// Mini-batch gradient descent with early stopping on the validation
// metric; the best-epoch parameters are restored at exit. Deterministic
// per seed. A non-finite loss aborts with diagnostics.
TrainResult train_model(Model& model, const corpus::Corpus& train, const corpus::Corpus& valid,
                        const TrainOptions& options);

// Mean NMD over dialogues and measures (quality models) or mean JSD over
// the utterance pool (nugget models).
double validation_metric(Model& model, const corpus::Corpus& corpus, std::size_t threads = 1);

corpus::PredictionSet predict_corpus(Model& model, const corpus::Corpus& corpus,
                                     std::size_t threads = 1);

std::string history_csv(const TrainResult& result);

}  // namespace nb::models
