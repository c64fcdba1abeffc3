#include "nuggetbench/metrics/metrics.hpp"

#include <cmath>

#include "nuggetbench/core/error.hpp"

namespace nb::metrics {

namespace {

void require_same_domain(const ProbabilityBins& a, const ProbabilityBins& b) {
  if (!(a.domain() == b.domain())) {
    throw ValidationError("distributions are over different bin sets");
  }
}

void require_ordered(const ProbabilityBins& p, const char* measure) {
  if (!p.domain().ordered()) {
    throw UnsupportedOperation(std::string(measure) + " requires ordered bins");
  }
  if (p.size() < 2) {
    throw ValidationError(std::string(measure) + " requires at least 2 bins");
  }
}

// Mean of DW_i over the support of p.
double order_aware_divergence(const ProbabilityBins& p, const ProbabilityBins& q) {
  const std::size_t b = p.size();
  double total = 0.0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < b; ++i) {
    if (p.mass(i) <= 0.0) continue;
    double dw = 0.0;
    for (std::size_t j = 0; j < b; ++j) {
      double d = p.mass(j) - q.mass(j);
      dw += std::abs(static_cast<double>(i) - static_cast<double>(j)) * d * d;
    }
    total += dw;
    ++support;
  }
  return total / static_cast<double>(support);
}

}  // namespace

double nmd(const ProbabilityBins& gold, const ProbabilityBins& pred) {
  require_same_domain(gold, pred);
  require_ordered(gold, "NMD");
  double acc_g = 0.0, acc_p = 0.0, total = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    acc_g += gold.mass(i);
    acc_p += pred.mass(i);
    total += std::abs(acc_g - acc_p);
  }
  return total / static_cast<double>(gold.size() - 1);
}

double rsnod(const ProbabilityBins& gold, const ProbabilityBins& pred) {
  require_same_domain(gold, pred);
  require_ordered(gold, "RSNOD");
  double snod =
      0.5 * (order_aware_divergence(gold, pred) + order_aware_divergence(pred, gold));
  return std::sqrt(snod / static_cast<double>(gold.size() - 1));
}

double jsd(const ProbabilityBins& gold, const ProbabilityBins& pred) {
  require_same_domain(gold, pred);
  double total = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    double g = gold.mass(i);
    double p = pred.mass(i);
    double m = 0.5 * (g + p);
    // Per-bin terms combine in a single commutative add so jsd(p,q) and
    // jsd(q,p) are bit-identical.
    double tg = g > 0.0 ? 0.5 * g * std::log2(g / m) : 0.0;
    double tp = p > 0.0 ? 0.5 * p * std::log2(p / m) : 0.0;
    total += tg + tp;
  }
  return total;
}

double rnss(const ProbabilityBins& gold, const ProbabilityBins& pred) {
  require_same_domain(gold, pred);
  double total = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    double d = gold.mass(i) - pred.mass(i);
    total += d * d;
  }
  return std::sqrt(total / 2.0);
}

}  // namespace nb::metrics
