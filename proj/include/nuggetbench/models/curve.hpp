#pragma once

#include "nuggetbench/models/train.hpp"

namespace nb::models {

struct CurvePoint {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  // mean JSD / mean RNSS for nugget models, mean NMD / mean RSNOD for
  // quality models, over the fixed test split
  double primary = 0.0;
  double secondary = 0.0;
};

// Trains from scratch on each prefix fraction of the seed-shuffled training
// set and evaluates on the fixed test split; one row per (fraction, seed).
std::vector<CurvePoint> learning_curve(const ModelConfig& config, const corpus::Corpus& train,
                                       const corpus::Corpus& test,
                                       const std::vector<double>& fractions,
                                       const std::vector<std::uint64_t>& seeds,
                                       const TrainOptions& base_options);

// Plot-ready CSV: per-run rows followed by a per-fraction median summary.
std::string curve_csv(const std::vector<CurvePoint>& points);

// Median of `primary` per fraction, in the order fractions first appear.
std::vector<std::pair<double, double>> curve_medians(const std::vector<CurvePoint>& points);

}  // namespace nb::models
