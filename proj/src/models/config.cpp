#include "nuggetbench/models/config.hpp"

#include <fstream>

#include <json.hpp>

#include "nuggetbench/core/error.hpp"

namespace nb::models {

std::string arch_name(Arch a) { return a == Arch::MeHGCNN ? "mehgcnn" : "hcnn-lstm"; }

Arch parse_arch(const std::string& name) {
  if (name == "mehgcnn") return Arch::MeHGCNN;
  if (name == "hcnn-lstm") return Arch::HcnnLstm;
  throw ConfigError("unknown architecture '" + name + "' (expected mehgcnn or hcnn-lstm)");
}

ModelConfig ModelConfig::defaults(Arch arch) {
  ModelConfig cfg;
  cfg.arch = arch;
  if (arch == Arch::MeHGCNN) {
    cfg.utter_stacks = 2;
    cfg.gating = true;
    cfg.memory = true;
    cfg.nugget_feature = true;
  } else {
    cfg.utter_stacks = 3;
    cfg.gating = false;
    cfg.memory = false;
    cfg.nugget_feature = false;
  }
  return cfg;
}

void ModelConfig::validate() const {
  if (embed_dim == 0 || conv_channels == 0 || context_channels == 0) {
    throw ConfigError("model dims must be positive");
  }
  if (utter_width == 0 || nd_width_a == 0 || nd_width_b == 0) {
    throw ConfigError("conv widths must be positive");
  }
  if (utter_stacks == 0 || context_stacks == 0) {
    throw ConfigError("stack counts must be positive");
  }
  if (k_max == 0) throw ConfigError("k_max must be positive");
  if (batch_size == 0 || epochs == 0) throw ConfigError("batch size and epochs must be positive");
  if (arch == Arch::HcnnLstm && nugget_feature) {
    throw ConfigError("the nugget feature applies only to the quality model");
  }
}

namespace {

template <typename J>
void emit(J& j, const ModelConfig& c) {
  j["arch"] = arch_name(c.arch);
  j["embed_dim"] = c.embed_dim;
  j["conv_channels"] = c.conv_channels;
  j["context_channels"] = c.context_channels;
  j["utter_width"] = c.utter_width;
  j["nd_width_a"] = c.nd_width_a;
  j["nd_width_b"] = c.nd_width_b;
  j["utter_stacks"] = c.utter_stacks;
  j["context_stacks"] = c.context_stacks;
  j["k_max"] = c.k_max;
  j["gating"] = c.gating;
  j["memory"] = c.memory;
  j["nugget_feature"] = c.nugget_feature;
  j["multi_stack"] = c.multi_stack;
  j["role_masking"] = c.role_masking;
  j["seed"] = c.seed;
  j["lr"] = c.optimizer.lr;
  j["beta1"] = c.optimizer.beta1;
  j["beta2"] = c.optimizer.beta2;
  j["eps"] = c.optimizer.eps;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["patience"] = c.patience;
}

ModelConfig absorb(const nlohmann::json& j) {
  Arch arch = Arch::HcnnLstm;
  if (j.contains("arch")) arch = parse_arch(j["arch"].get<std::string>());
  ModelConfig c = ModelConfig::defaults(arch);
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j[key].get<std::decay_t<decltype(slot)>>();
  };
  get("embed_dim", c.embed_dim);
  get("conv_channels", c.conv_channels);
  get("context_channels", c.context_channels);
  get("utter_width", c.utter_width);
  get("nd_width_a", c.nd_width_a);
  get("nd_width_b", c.nd_width_b);
  get("utter_stacks", c.utter_stacks);
  get("context_stacks", c.context_stacks);
  get("k_max", c.k_max);
  get("gating", c.gating);
  get("memory", c.memory);
  get("nugget_feature", c.nugget_feature);
  get("multi_stack", c.multi_stack);
  get("role_masking", c.role_masking);
  get("seed", c.seed);
  get("lr", c.optimizer.lr);
  get("beta1", c.optimizer.beta1);
  get("beta2", c.optimizer.beta2);
  get("eps", c.optimizer.eps);
  get("batch_size", c.batch_size);
  get("epochs", c.epochs);
  get("patience", c.patience);
  c.validate();
  return c;
}

}  // namespace

std::string ModelConfig::to_json() const {
  nlohmann::ordered_json j;
  emit(j, *this);
  return j.dump(2);
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  try {
    return absorb(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
}

ModelConfig ModelConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return absorb(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace nb::models
