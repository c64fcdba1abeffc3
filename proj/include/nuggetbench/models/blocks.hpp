#pragma once

#include <vector>

#include "nuggetbench/core/labels.hpp"
#include "nuggetbench/tk/cells.hpp"
#include "nuggetbench/tk/ops.hpp"

namespace nb::models {

// Conv feature/gate pair; the gate half is absent when gating is off.
struct GatedConv {
  tk::Var wa, ba;
  tk::Var wb, bb;
  bool gated = false;

  static GatedConv init(std::size_t width, std::size_t in_ch, std::size_t out_ch, bool gated,
                        Rng& rng, const std::string& prefix);
  // ConvA(x) * sig(ConvB(x)) when gated, tanh(ConvA(x)) otherwise.
  tk::Var apply(const tk::Var& x, std::size_t width) const;
  void collect(std::vector<tk::Var>& out) const;
};

// Bi-directional GRU encoder: tanh(forward_i + backward_i) per position.
struct BiGru {
  tk::GruParams fwd;
  tk::GruParams bwd;

  static BiGru init(std::size_t in_dim, std::size_t hidden, Rng& rng, const std::string& prefix);
  std::vector<tk::Var> apply(const std::vector<tk::Var>& seq) const;
  void collect(std::vector<tk::Var>& out) const;
};

// Self-attention memory: keys/values from two independent Bi-GRUs, one
// attention hop, residual connection. Input and hidden dims must match.
struct MemoryLayer {
  BiGru input_memory;
  BiGru output_memory;

  static MemoryLayer init(std::size_t dim, Rng& rng, const std::string& prefix);
  // Returns ml_i = sum_i' softmax_i'(cl_i . I_i') O_i' + cl_i.
  std::vector<tk::Var> apply(const std::vector<tk::Var>& cl) const;
  void collect(std::vector<tk::Var>& out) const;
};

tk::Var speaker_onehot(Speaker s);
std::vector<std::uint8_t> role_mask(Speaker s);

}  // namespace nb::models
