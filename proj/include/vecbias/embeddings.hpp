#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vecbias/types.hpp"

namespace vecbias {

// Ordered token list with its inverse index. Tokens are unique, non-empty and
// contain no whitespace; case is preserved.
class Vocabulary {
 public:
  int add(std::string token);  // rejects duplicates and empty tokens
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const { return words_[id]; }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

enum class EmbeddingFormat {
  word2vec_text,  // header "<n> <d>", then "<token> <v1> ... <vd>"
  glove_text,     // same rows, no header; d inferred from the first row
};

EmbeddingFormat embedding_format_from_name(std::string_view name);
const char* embedding_format_name(EmbeddingFormat format);

// Vocabulary plus one un-normalized vector per word. Immutable after load;
// concurrent reads are safe. Vectors keep exactly the values that were read:
// this library never rescales them.
struct EmbeddingSet {
  Vocabulary vocab;
  Matrix matrix;  // |vocab| rows, dim columns
  int dim = 0;

  std::optional<RowRef> lookup(std::string_view token) const;
  RowRef row(int id) const;
  int size() const { return vocab.size(); }

  // Throws not_found naming the token.
  Vector vector_for(std::string_view token) const;
};

EmbeddingSet load_embeddings(const std::string& path, EmbeddingFormat format);
void save_embeddings(const EmbeddingSet& set, const std::string& path, EmbeddingFormat format);

// Shortest text form that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace vecbias
