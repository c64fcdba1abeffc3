#pragma once

#include <cstdint>
#include <string>

#include "nuggetbench/tk/optim.hpp"

namespace nb::models {

enum class Arch { MeHGCNN, HcnnLstm };

std::string arch_name(Arch a);
Arch parse_arch(const std::string& name);

struct ModelConfig {
  Arch arch = Arch::HcnnLstm;

  std::size_t embed_dim = 64;
  std::size_t conv_channels = 32;     // per-conv output channels in the utterance layer
  std::size_t context_channels = 32;  // context conv channels / recurrent hidden size
  std::size_t utter_width = 3;        // gated-conv filter width (hierarchical DQ encoder)
  std::size_t nd_width_a = 2;         // parallel filter widths (ND encoder)
  std::size_t nd_width_b = 3;
  std::size_t utter_stacks = 2;   // 2 for the DQ encoder, 3 for ND; see defaults()
  std::size_t context_stacks = 2; // bi-lstm stacks (ND context layer)
  std::size_t k_max = 10;         // dialogue padding length for the memory concat

  bool gating = true;
  bool memory = true;
  bool nugget_feature = true;  // DQ only
  bool multi_stack = true;     // false forces a single utterance stack
  bool role_masking = true;    // ND head masks off-role logits

  std::uint64_t seed = 42;
  tk::AdamConfig optimizer;
  std::size_t batch_size = 8;
  std::size_t epochs = 100;
  std::size_t patience = 10;

  static ModelConfig defaults(Arch arch);
  std::size_t effective_utter_stacks() const { return multi_stack ? utter_stacks : 1; }
  void validate() const;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
  // Defaults for `arch`, overridden by any keys present in the file.
  static ModelConfig from_json_file(const std::string& path);
};

}  // namespace nb::models
