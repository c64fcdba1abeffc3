#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nuggetbench/tk/tensor.hpp"

namespace nb::tk {

// Checkpoint file layout:
//   u64 little-endian header length
//   header: UTF-8 JSON {"format","version","tensors":[{"name","shape","offset"}]}
//   payload: flat 64-bit little-endian values, offsets in bytes from the
//   payload start
struct NamedTensor {
  std::string name;
  Tensor tensor;
};

void write_checkpoint(const std::string& path,
                      const std::vector<std::pair<std::string, const Tensor*>>& tensors);

std::vector<NamedTensor> read_checkpoint(const std::string& path);

}  // namespace nb::tk
