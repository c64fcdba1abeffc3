#pragma once

#include "nuggetbench/core/rng.hpp"
#include "nuggetbench/tk/tensor.hpp"

namespace nb::tk {

// Uniform in +/- sqrt(6 / (fan_in + fan_out)); fans derive from the shape
// (rank-2: rows/cols, rank-1 treated as fan_in = dim, fan_out = 1).
inline Tensor glorot_uniform(std::vector<std::size_t> shape, Rng& rng) {
  std::size_t fan_in = 1, fan_out = 1;
  if (shape.size() == 2) {
    fan_in = shape[0];
    fan_out = shape[1];
  } else if (shape.size() == 1) {
    fan_in = shape[0];
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.numel(); ++i) t.data()[i] = rng.uniform(-bound, bound);
  return t;
}

}  // namespace nb::tk
