#include "nuggetbench/models/model.hpp"

#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "nuggetbench/models/hcnn_lstm.hpp"
#include "nuggetbench/models/mehgcnn.hpp"
#include "nuggetbench/tk/checkpoint.hpp"

namespace nb::models {

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p->value.numel();
  return n;
}

std::unique_ptr<Model> build_model(const ModelConfig& config, Vocab vocab) {
  if (config.arch == Arch::MeHGCNN) {
    return std::make_unique<MeHGCNN>(config, std::move(vocab));
  }
  return std::make_unique<HcnnLstm>(config, std::move(vocab));
}

void save_model(const Model& model, const std::string& path) {
  std::vector<std::pair<std::string, const tk::Tensor*>> tensors;
  for (const auto& p : model.parameters()) {
    tensors.emplace_back(p->name, &p->value);
  }
  tk::write_checkpoint(path, tensors);

  nlohmann::ordered_json sidecar;
  sidecar["config"] = nlohmann::ordered_json::parse(model.config().to_json());
  // Vocabulary without the two reserved slots; reconstruction re-adds them.
  std::vector<std::string> words(model.vocab().words().begin() + 2, model.vocab().words().end());
  sidecar["vocab"] = words;
  std::ofstream out(path + ".json", std::ios::binary);
  if (!out) throw IoError("cannot write model sidecar '" + path + ".json'");
  out << sidecar.dump(2) << "\n";
}

std::unique_ptr<Model> load_model(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw IoError("cannot open model sidecar '" + path + ".json'");
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ".json: " + e.what());
  }
  ModelConfig config = ModelConfig::from_json(sidecar.at("config").dump());
  Vocab vocab(sidecar.at("vocab").get<std::vector<std::string>>());
  auto model = build_model(config, std::move(vocab));

  auto loaded = tk::read_checkpoint(path);
  std::unordered_map<std::string, tk::Tensor*> by_name;
  for (auto& nt : loaded) by_name[nt.name] = &nt.tensor;
  for (const auto& p : model->parameters()) {
    auto it = by_name.find(p->name);
    if (it == by_name.end()) {
      throw ParseError("checkpoint '" + path + "' is missing tensor '" + p->name + "'");
    }
    if (!(it->second->shape() == p->value.shape())) {
      throw ParseError("checkpoint tensor '" + p->name + "' has shape " +
                       it->second->shape_string() + ", model expects " +
                       p->value.shape_string());
    }
    p->value = std::move(*it->second);
  }
  return model;
}

}  // namespace nb::models
