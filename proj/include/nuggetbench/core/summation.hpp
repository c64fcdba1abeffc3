#pragma once

#include <cstddef>

namespace nb {

// Kahan compensated summation; keeps run aggregates order-insensitive
// well below the 1e-12 contract.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }
  std::size_t count() const { return n_; }
  void add_counted(double x) {
    add(x);
    ++n_;
  }
  double mean() const { return n_ == 0 ? 0.0 : s_ / static_cast<double>(n_); }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace nb
