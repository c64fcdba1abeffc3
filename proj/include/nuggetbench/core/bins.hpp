#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nuggetbench/core/error.hpp"
#include "nuggetbench/core/labels.hpp"

namespace nb {

// Identifies a bin set: its labels and whether they carry a total order.
// Shared immutable; ProbabilityBins instances reference one.
class BinDomain {
 public:
  BinDomain(std::vector<std::string> labels, bool ordered)
      : labels_(std::move(labels)), ordered_(ordered) {}

  // The 5 ordered score bins -2..2.
  static const std::shared_ptr<const BinDomain>& scores();
  // The 7 categorical nugget labels in canonical order.
  static const std::shared_ptr<const BinDomain>& nuggets();
  // Generic ordered domain with labels "0".."n-1" (tests, synthetic data).
  static std::shared_ptr<const BinDomain> ordinal(std::size_t n);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  bool ordered() const { return ordered_; }
  std::size_t size() const { return labels_.size(); }

  bool operator==(const BinDomain& other) const {
    return ordered_ == other.ordered_ && labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  bool ordered_;
};

using BinDomainPtr = std::shared_ptr<const BinDomain>;

// Normalized probability mass over a bin domain. Construction renormalizes,
// so the mass sums to 1 within 1e-9 afterwards; callers enforce their own
// pre-normalization acceptance windows.
class ProbabilityBins {
 public:
  ProbabilityBins() = default;
  ProbabilityBins(BinDomainPtr domain, std::vector<double> mass);

  static ProbabilityBins point_mass(BinDomainPtr domain, std::size_t index);
  static ProbabilityBins uniform(BinDomainPtr domain);

  const BinDomain& domain() const { return *domain_; }
  const BinDomainPtr& domain_ptr() const { return domain_; }
  const std::vector<double>& mass() const { return mass_; }
  double mass(std::size_t i) const { return mass_[i]; }
  std::size_t size() const { return mass_.size(); }
  bool empty() const { return domain_ == nullptr; }

  bool operator==(const ProbabilityBins& other) const {
    return (domain_ == other.domain_ || (domain_ && other.domain_ && *domain_ == *other.domain_)) &&
           mass_ == other.mass_;
  }

 private:
  BinDomainPtr domain_;
  std::vector<double> mass_;
};

// Tied-argmax set: all bins whose mass is within tolerance of the peak.
struct ArgmaxSet {
  std::vector<std::size_t> indices;  // ascending canonical order, non-empty
  double peak = 0.0;

  bool contains(std::size_t i) const {
    for (std::size_t j : indices) {
      if (j == i) return true;
    }
    return false;
  }
  // Canonical-order first member.
  std::size_t first() const { return indices.front(); }
};

struct Top2Gap {
  std::size_t lo = 0;  // the two top-mass bins, reported in canonical order
  std::size_t hi = 0;
  double gap = 0.0;  // top mass minus second mass, >= 0
};

// Running sum over ordered bins; output[i] = sum of mass[0..i].
// Throws UnsupportedOperation for categorical domains.
std::vector<double> cumulative(const ProbabilityBins& p);

// Default tolerance 1e-6: gold masses are multiples of 1/annotators, so any
// tolerance below the quantum behaves identically while absorbing float
// ingest noise.
ArgmaxSet argmax_set(const ProbabilityBins& p, double tolerance = 1e-6);

// The two largest-mass bins (ties broken by canonical order) and their gap.
Top2Gap top2_gap(const ProbabilityBins& p);

}  // namespace nb
