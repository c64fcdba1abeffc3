#include "nuggetbench/core/bins.hpp"

#include <algorithm>
#include <cmath>

namespace nb {

const BinDomainPtr& BinDomain::scores() {
  static const BinDomainPtr dom = std::make_shared<const BinDomain>(
      std::vector<std::string>(kScoreBinNames.begin(), kScoreBinNames.end()), true);
  return dom;
}

const BinDomainPtr& BinDomain::nuggets() {
  static const BinDomainPtr dom = std::make_shared<const BinDomain>(
      std::vector<std::string>(kNuggetNames.begin(), kNuggetNames.end()), false);
  return dom;
}

BinDomainPtr BinDomain::ordinal(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return std::make_shared<const BinDomain>(std::move(labels), true);
}

ProbabilityBins::ProbabilityBins(BinDomainPtr domain, std::vector<double> mass)
    : domain_(std::move(domain)), mass_(std::move(mass)) {
  if (!domain_) throw ValidationError("probability bins require a domain");
  if (mass_.size() != domain_->size()) {
    throw ValidationError("mass vector length " + std::to_string(mass_.size()) +
                          " does not match domain size " + std::to_string(domain_->size()));
  }
  double sum = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) {  // also rejects NaN
      throw ValidationError("probability mass must be non-negative and finite");
    }
    sum += m;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw ValidationError("probability mass must have a positive finite sum");
  }
  // Skip the division for already-normalized input so normalization is
  // exactly idempotent and serialized corpora round-trip bit-for-bit.
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& m : mass_) m /= sum;
  }
}

ProbabilityBins ProbabilityBins::point_mass(BinDomainPtr domain, std::size_t index) {
  std::vector<double> mass(domain->size(), 0.0);
  if (index >= mass.size()) throw ValidationError("point mass index out of range");
  mass[index] = 1.0;
  return ProbabilityBins(std::move(domain), std::move(mass));
}

ProbabilityBins ProbabilityBins::uniform(BinDomainPtr domain) {
  std::vector<double> mass(domain->size(), 1.0);
  return ProbabilityBins(std::move(domain), std::move(mass));
}

std::vector<double> cumulative(const ProbabilityBins& p) {
  if (!p.domain().ordered()) {
    throw UnsupportedOperation("cumulative sums are undefined over categorical bins");
  }
  std::vector<double> out(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p.mass(i);
    out[i] = acc;
  }
  return out;
}

ArgmaxSet argmax_set(const ProbabilityBins& p, double tolerance) {
  if (tolerance < 0.0) throw ConfigError("argmax tolerance must be non-negative");
  ArgmaxSet set;
  set.peak = *std::max_element(p.mass().begin(), p.mass().end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.mass(i) >= set.peak - tolerance) set.indices.push_back(i);
  }
  return set;
}

Top2Gap top2_gap(const ProbabilityBins& p) {
  if (p.size() < 2) throw ValidationError("top2_gap requires at least 2 bins");
  // Two largest masses; equal masses resolve to the earlier canonical index.
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p.mass(i) > p.mass(best)) best = i;
  }
  std::size_t second = best == 0 ? 1 : 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == best) continue;
    if (p.mass(i) > p.mass(second)) second = i;
  }
  Top2Gap g;
  g.lo = std::min(best, second);
  g.hi = std::max(best, second);
  g.gap = p.mass(best) - p.mass(second);
  return g;
}

}  // namespace nb
