#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "nuggetbench/corpus/corpus.hpp"
#include "nuggetbench/tk/tensor.hpp"

namespace nb::models {

// Token -> row index map with reserved padding and unknown-word slots.
// Every token resolves to exactly one row.
class Vocab {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;

  Vocab();
  explicit Vocab(std::vector<std::string> words);  // without the reserved slots

  static Vocab build(const corpus::Corpus& corpus);

  std::size_t size() const { return words_.size(); }
  std::size_t lookup(const std::string& token) const;
  std::vector<std::size_t> encode(const std::vector<std::string>& tokens) const;
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Text vector file: first line "count dim", then "word v1 ... vd" per line.
// Rows for words present in the vocabulary overwrite the table; others are
// ignored. Returns the number of rows applied.
std::size_t load_pretrained_embeddings(const std::string& path, const Vocab& vocab,
                                       tk::Tensor& table);

}  // namespace nb::models
