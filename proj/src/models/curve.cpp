#include "nuggetbench/models/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "nuggetbench/core/rng.hpp"
#include "nuggetbench/core/summation.hpp"
#include "nuggetbench/metrics/run_eval.hpp"

namespace nb::models {

std::vector<CurvePoint> learning_curve(const ModelConfig& config, const corpus::Corpus& train,
                                       const corpus::Corpus& test,
                                       const std::vector<double>& fractions,
                                       const std::vector<std::uint64_t>& seeds,
                                       const TrainOptions& base_options) {
  if (train.empty()) throw ValidationError("learning curve: empty training corpus");
  if (fractions.empty()) throw ConfigError("learning curve: no fractions given");
  for (double f : fractions) {
    if (!(f > 0.0) || f > 1.0) {
      throw ConfigError("learning curve: fractions must lie in (0, 1]");
    }
  }

  std::vector<CurvePoint> points;
  for (std::uint64_t seed : seeds) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    for (double fraction : fractions) {
      const std::size_t n =
          static_cast<std::size_t>(std::floor(fraction * static_cast<double>(train.size())));
      if (n == 0) {
        throw ValidationError("learning curve: fraction " + std::to_string(fraction) +
                              " of " + std::to_string(train.size()) + " dialogues is empty");
      }
      corpus::Corpus subset;
      subset.reserve(n);
      for (std::size_t i = 0; i < n; ++i) subset.push_back(train[order[i]]);

      ModelConfig run_config = config;
      run_config.seed = seed;
      auto model = build_model(run_config, Vocab::build(subset));
      TrainOptions options = base_options;
      options.seed = seed;
      train_model(*model, subset, subset, options);

      auto preds = predict_corpus(*model, test, base_options.threads);
      CurvePoint p;
      p.fraction = fraction;
      p.seed = seed;
      p.n_train = n;
      if (run_config.arch == Arch::MeHGCNN) {
        auto run = metrics::evaluate_dq_run(test, preds, {.threads = base_options.threads});
        KahanSum sn, sr;
        for (std::size_t m = 0; m < kMeasureCount; ++m) {
          sn.add_counted(run.mean_nmd[m]);
          sr.add_counted(run.mean_rsnod[m]);
        }
        p.primary = sn.mean();
        p.secondary = sr.mean();
      } else {
        auto run = metrics::evaluate_nd_run(test, preds, {.threads = base_options.threads});
        p.primary = run.mean_jsd;
        p.secondary = run.mean_rnss;
      }
      points.push_back(p);
    }
  }
  return points;
}

std::vector<std::pair<double, double>> curve_medians(const std::vector<CurvePoint>& points) {
  std::vector<double> seen;
  std::map<double, std::vector<double>> grouped;
  for (const auto& p : points) {
    if (!grouped.count(p.fraction)) seen.push_back(p.fraction);
    grouped[p.fraction].push_back(p.primary);
  }
  std::vector<std::pair<double, double>> out;
  for (double f : seen) {
    auto& v = grouped[f];
    std::sort(v.begin(), v.end());
    double median = v.size() % 2 == 1 ? v[v.size() / 2]
                                      : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    out.emplace_back(f, median);
  }
  return out;
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  out << "fraction,seed,n_train,primary,secondary\n";
  char buf[160];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6g,%llu,%zu,%.9g,%.9g\n", p.fraction,
                  static_cast<unsigned long long>(p.seed), p.n_train, p.primary, p.secondary);
    out << buf;
  }
  for (const auto& [fraction, median] : curve_medians(points)) {
    std::snprintf(buf, sizeof(buf), "%.6g,median,,%.9g,\n", fraction, median);
    out << buf;
  }
  return out.str();
}

}  // namespace nb::models
