#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nuggetbench/tk/graph.hpp"

namespace nb::tk {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Deterministic given identical gradients; a NaN or
// Inf gradient aborts with the parameter's name.
class Adam {
 public:
  Adam(std::vector<Var> params, AdamConfig config = {});

  void step();
  void zero_grad();
  const std::vector<Var>& params() const { return params_; }
  std::uint64_t steps() const { return t_; }

 private:
  struct Slot {
    Tensor m;
    Tensor v;
  };
  std::vector<Var> params_;
  std::vector<Slot> state_;
  AdamConfig config_;
  std::uint64_t t_ = 0;
};

}  // namespace nb::tk
