#include "nuggetbench/metrics/run_eval.hpp"

#include "nuggetbench/core/error.hpp"
#include "nuggetbench/core/parallel.hpp"
#include "nuggetbench/core/summation.hpp"

namespace nb::metrics {

RunScoreDQ evaluate_dq_run(const corpus::Corpus& gold, const corpus::PredictionSet& pred,
                           const EvalOptions& options) {
  RunScoreDQ run;
  run.per_dialogue.resize(gold.size());
  parallel_for(gold.size(), options.threads, [&](std::size_t i) {
    const corpus::Dialogue& d = gold[i];
    if (!d.quality) {
      throw ValidationError("dialogue " + d.id + ": gold corpus has no quality annotations");
    }
    const corpus::PredictedDialogue* p = pred.find(d.id);
    if (!p || !p->quality) {
      throw ValidationError("dialogue " + d.id + ": missing quality prediction");
    }
    DialogueQualityScore& s = run.per_dialogue[i];
    s.dialogue_id = d.id;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      s.nmd[m] = nmd((*d.quality)[m], (*p->quality)[m]);
      s.rsnod[m] = rsnod((*d.quality)[m], (*p->quality)[m]);
    }
  });
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    KahanSum nmd_sum, rsnod_sum;
    for (const auto& s : run.per_dialogue) {
      nmd_sum.add_counted(s.nmd[m]);
      rsnod_sum.add_counted(s.rsnod[m]);
    }
    run.mean_nmd[m] = nmd_sum.mean();
    run.mean_rsnod[m] = rsnod_sum.mean();
  }
  return run;
}

RunScoreND evaluate_nd_run(const corpus::Corpus& gold, const corpus::PredictionSet& pred,
                           const EvalOptions& options) {
  RunScoreND run;
  std::vector<std::size_t> offsets(gold.size() + 1, 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    offsets[i + 1] = offsets[i] + gold[i].utterances.size();
  }
  run.per_utterance.resize(offsets.back());
  parallel_for(gold.size(), options.threads, [&](std::size_t i) {
    const corpus::Dialogue& d = gold[i];
    const corpus::PredictedDialogue* p = pred.find(d.id);
    if (!p) throw ValidationError("dialogue " + d.id + ": missing nugget predictions");
    if (p->nuggets.size() != d.utterances.size()) {
      throw ValidationError("dialogue " + d.id + ": prediction has " +
                            std::to_string(p->nuggets.size()) + " turns, gold has " +
                            std::to_string(d.utterances.size()));
    }
    for (std::size_t u = 0; u < d.utterances.size(); ++u) {
      if (p->nuggets[u].empty()) {
        throw ValidationError("dialogue " + d.id + " utterance " + std::to_string(u) +
                              ": missing nugget prediction");
      }
      UtteranceNuggetScore& s = run.per_utterance[offsets[i] + u];
      s.dialogue_id = d.id;
      s.utterance_index = u;
      s.jsd = jsd(d.utterances[u].gold_nugget, p->nuggets[u]);
      s.rnss = rnss(d.utterances[u].gold_nugget, p->nuggets[u]);
    }
  });
  if (options.nd_aggregation == NdAggregation::FlatUtterancePool) {
    KahanSum jsd_sum, rnss_sum;
    for (const auto& s : run.per_utterance) {
      jsd_sum.add_counted(s.jsd);
      rnss_sum.add_counted(s.rnss);
    }
    run.mean_jsd = jsd_sum.mean();
    run.mean_rnss = rnss_sum.mean();
  } else {
    KahanSum jsd_sum, rnss_sum;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (offsets[i + 1] == offsets[i]) continue;
      KahanSum dj, dr;
      for (std::size_t u = offsets[i]; u < offsets[i + 1]; ++u) {
        dj.add_counted(run.per_utterance[u].jsd);
        dr.add_counted(run.per_utterance[u].rnss);
      }
      jsd_sum.add_counted(dj.mean());
      rnss_sum.add_counted(dr.mean());
    }
    run.mean_jsd = jsd_sum.mean();
    run.mean_rnss = rnss_sum.mean();
  }
  return run;
}

}  // namespace nb::metrics
