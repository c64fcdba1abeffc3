#include "nuggetbench/models/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "nuggetbench/core/error.hpp"

namespace nb::models {

Vocab::Vocab() : words_{"<pad>", "<unk>"} {
  index_["<pad>"] = kPad;
  index_["<unk>"] = kUnk;
}

Vocab::Vocab(std::vector<std::string> words) : Vocab() {
  for (auto& w : words) {
    if (index_.emplace(w, words_.size()).second) {
      words_.push_back(std::move(w));
    }
  }
}

Vocab Vocab::build(const corpus::Corpus& corpus) {
  std::set<std::string> seen;
  for (const auto& d : corpus) {
    for (const auto& u : d.utterances) {
      for (const auto& t : u.tokens) seen.insert(t);
    }
  }
  return Vocab(std::vector<std::string>(seen.begin(), seen.end()));
}

std::size_t Vocab::lookup(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<std::size_t> Vocab::encode(const std::vector<std::string>& tokens) const {
  // The degenerate empty utterance encodes as a single padding token.
  if (tokens.empty()) return {kPad};
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(lookup(t));
  return ids;
}

std::size_t load_pretrained_embeddings(const std::string& path, const Vocab& vocab,
                                       tk::Tensor& table) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw ParseError(path + ": empty embedding file");
  std::istringstream hs(header);
  std::size_t count = 0, dim = 0;
  if (!(hs >> count >> dim)) {
    throw ParseError(path + ": first line must be 'count dim'");
  }
  if (dim != table.cols()) {
    throw ParseError(path + ": embedding dim " + std::to_string(dim) +
                     " does not match table dim " + std::to_string(table.cols()));
  }
  std::size_t applied = 0;
  std::string line;
  for (std::size_t row = 0; row < count && std::getline(in, line); ++row) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::size_t idx = vocab.lookup(word);
    std::vector<double> values(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!(ls >> values[i])) {
        throw ParseError(path + ": row for '" + word + "' has fewer than " +
                         std::to_string(dim) + " values");
      }
    }
    if (idx != Vocab::kUnk || word == "<unk>") {
      std::copy(values.begin(), values.end(), table.row_ptr(idx));
      ++applied;
    }
  }
  return applied;
}

}  // namespace nb::models
