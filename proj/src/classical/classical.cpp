#include "nuggetbench/classical/classical.hpp"

#include "nuggetbench/core/error.hpp"
#include "nuggetbench/core/summation.hpp"

namespace nb::classical {

OneHotExpansion expand_onehot(const corpus::Dialogue& d, double tie_tolerance) {
  OneHotExpansion out;
  out.source_dialogue = d.id;
  std::vector<ArgmaxSet> sets;
  sets.reserve(d.utterances.size());
  std::size_t factor = 1;
  for (const auto& u : d.utterances) {
    if (u.gold_nugget.empty()) {
      throw ValidationError("dialogue " + d.id + " utterance " + std::to_string(u.index) +
                            ": missing gold nugget distribution");
    }
    sets.push_back(argmax_set(u.gold_nugget, tie_tolerance));
    factor *= sets.back().indices.size();
    if (factor > kExpansionCap) {
      throw ValidationError("dialogue " + d.id + ": one-hot expansion factor exceeds " +
                            std::to_string(kExpansionCap));
    }
  }
  out.sequences.reserve(factor);
  for (std::size_t s = 0; s < factor; ++s) {
    std::vector<std::size_t> seq(sets.size());
    std::size_t radix = s;
    for (std::size_t u = 0; u < sets.size(); ++u) {
      seq[u] = sets[u].indices[radix % sets[u].indices.size()];
      radix /= sets[u].indices.size();
    }
    out.sequences.push_back(std::move(seq));
  }
  return out;
}

ExpansionStatistics expansion_statistics(const corpus::Corpus& corpus, double tie_tolerance) {
  ExpansionStatistics stats;
  for (const auto& d : corpus) {
    OneHotExpansion e = expand_onehot(d, tie_tolerance);
    stats.dialogues_before += 1;
    stats.utterances_before += d.utterances.size();
    stats.dialogues_after += e.sequences.size();
    stats.utterances_after += e.sequences.size() * d.utterances.size();
  }
  return stats;
}

double multi_gold_accuracy(const std::vector<ArgmaxSet>& gold_sets,
                           const std::vector<std::size_t>& predicted) {
  if (gold_sets.size() != predicted.size()) {
    throw ValidationError("multi_gold_accuracy: gold and predicted lengths differ (" +
                          std::to_string(gold_sets.size()) + " vs " +
                          std::to_string(predicted.size()) + ")");
  }
  if (gold_sets.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold_sets.size(); ++i) {
    if (gold_sets[i].contains(predicted[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold_sets.size());
}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (std::size_t c : row) t += c;
  }
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < kNuggetCount; ++i) t += counts[i][i];
  return t;
}

ConfusionMatrix confusion_matrix(const std::vector<ArgmaxSet>& gold_sets,
                                 const std::vector<std::size_t>& predicted) {
  if (gold_sets.size() != predicted.size()) {
    throw ValidationError("confusion_matrix: gold and predicted lengths differ");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold_sets.size(); ++i) {
    std::size_t p = predicted[i];
    std::size_t truth = gold_sets[i].contains(p) ? p : gold_sets[i].first();
    ++m.counts[p][truth];
  }
  return m;
}

PRFTable prf_from_confusion(const ConfusionMatrix& m) {
  const std::size_t total = m.total();
  if (total == 0) throw ValidationError("prf_from_confusion: empty confusion matrix");
  PRFTable t;
  KahanSum mp, mr, mf;
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    std::size_t row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < kNuggetCount; ++j) {
      row_sum += m.counts[i][j];
      col_sum += m.counts[j][i];
    }
    double diag = static_cast<double>(m.counts[i][i]);
    t.precision[i] = row_sum == 0 ? 0.0 : diag / static_cast<double>(row_sum);
    t.recall[i] = col_sum == 0 ? 0.0 : diag / static_cast<double>(col_sum);
    double pr = t.precision[i] + t.recall[i];
    t.f1[i] = pr == 0.0 ? 0.0 : 2.0 * t.precision[i] * t.recall[i] / pr;
    mp.add(t.precision[i]);
    mr.add(t.recall[i]);
    mf.add(t.f1[i]);
  }
  t.macro_precision = mp.value() / static_cast<double>(kNuggetCount);
  t.macro_recall = mr.value() / static_cast<double>(kNuggetCount);
  t.macro_f1 = mf.value() / static_cast<double>(kNuggetCount);
  t.accuracy = static_cast<double>(m.trace()) / static_cast<double>(total);
  return t;
}

std::vector<TieGapRecord> tie_gap_table(const corpus::Corpus& corpus) {
  std::map<std::pair<std::size_t, std::size_t>, std::pair<KahanSum, std::size_t>> acc;
  std::size_t total = 0;
  for (const auto& d : corpus) {
    for (const auto& u : d.utterances) {
      Top2Gap g = top2_gap(u.gold_nugget);
      auto& slot = acc[{g.lo, g.hi}];
      slot.first.add(g.gap);
      slot.second += 1;
      ++total;
    }
  }
  std::vector<TieGapRecord> table;
  table.reserve(acc.size());
  for (const auto& [pair, slot] : acc) {
    TieGapRecord rec;
    rec.lo = pair.first;
    rec.hi = pair.second;
    rec.count = slot.second;
    rec.mean_gap = slot.first.value() / static_cast<double>(slot.second);
    rec.fraction = total == 0 ? 0.0 : static_cast<double>(slot.second) / static_cast<double>(total);
    table.push_back(rec);
  }
  return table;
}

std::array<double, kMeasureCount> dq_classification_eval(const corpus::Corpus& gold,
                                                         const corpus::PredictionSet& pred) {
  std::array<std::vector<ArgmaxSet>, kMeasureCount> gold_sets;
  std::array<std::vector<std::size_t>, kMeasureCount> predicted;
  for (const auto& d : gold) {
    if (!d.quality) {
      throw ValidationError("dialogue " + d.id + ": gold corpus has no quality annotations");
    }
    const corpus::PredictedDialogue* p = pred.find(d.id);
    if (!p || !p->quality) {
      throw ValidationError("dialogue " + d.id + ": missing quality prediction");
    }
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      gold_sets[m].push_back(argmax_set((*d.quality)[m]));
      predicted[m].push_back(argmax_set((*p->quality)[m], 0.0).first());
    }
  }
  std::array<double, kMeasureCount> accuracy{};
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    accuracy[m] = multi_gold_accuracy(gold_sets[m], predicted[m]);
  }
  return accuracy;
}

SequenceLabels collect_nd_labels(const corpus::Corpus& gold, const corpus::PredictionSet& pred) {
  SequenceLabels labels;
  for (const auto& d : gold) {
    const corpus::PredictedDialogue* p = pred.find(d.id);
    if (!p) throw ValidationError("dialogue " + d.id + ": missing nugget predictions");
    if (p->nuggets.size() != d.utterances.size()) {
      throw ValidationError("dialogue " + d.id + ": prediction turn count differs from gold");
    }
    for (std::size_t u = 0; u < d.utterances.size(); ++u) {
      if (p->nuggets[u].empty()) {
        throw ValidationError("dialogue " + d.id + " utterance " + std::to_string(u) +
                              ": missing nugget prediction");
      }
      labels.gold_sets.push_back(argmax_set(d.utterances[u].gold_nugget));
      labels.predicted.push_back(argmax_set(p->nuggets[u], 0.0).first());
    }
  }
  return labels;
}

}  // namespace nb::classical
