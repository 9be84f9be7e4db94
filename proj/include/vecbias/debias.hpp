#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vecbias/embeddings.hpp"
#include "vecbias/relations.hpp"

namespace vecbias {

enum class SubspaceMode {
  span,  // provable: orthonormal basis of all pair differences
  pc1,   // single principal direction
};

enum class SelectorMode {
  none,          // protect only the explicit list (and pair words)
  list,          // same, but an explicit list is required
  unsupervised,  // protect words more aligned with b* than with b'
};

SubspaceMode subspace_mode_from_name(std::string_view name);
SelectorMode selector_mode_from_name(std::string_view name);
const char* subspace_mode_name(SubspaceMode mode);
const char* selector_mode_name(SelectorMode mode);

struct DebiasConfig {
  SubspaceMode mode = SubspaceMode::span;
  SelectorMode selector = SelectorMode::none;
  WordPairSet pairs;         // defines the subspace and b*
  WordPairSet biased_pairs;  // defines b'; required for the unsupervised selector
  std::vector<std::string> protected_words;

  void validate() const;
};

// w - proj_B(w), applied to the un-normalized vector.
Vector debias_word(const Vector& w, const BiasSubspace& subspace);

// Words to protect under the unsupervised rule: |beta(w; b*)| >= |beta(w; b')|
// with b* from cfg.pairs and b' from cfg.biased_pairs. Ties protect. Returned
// in vocabulary order.
std::vector<std::string> select_appropriate(const EmbeddingSet& set, const DebiasConfig& cfg);

struct DebiasOutcome {
  EmbeddingSet embeddings;
  std::vector<std::string> protected_words;  // effective set, vocabulary order
  int subspace_rank = 0;
  std::size_t debiased_count = 0;
  double max_abs_inner = 0.0;     // max |<w_d, x - y>| over debiased words and pairs
  double max_scaled_inner = 0.0;  // same, divided by ||w|| * ||x - y||
};

// Replaces every word outside the pair words and the effective protected set
// by its debiased vector. Untouched rows are copied bit for bit.
DebiasOutcome debias_embedding(const EmbeddingSet& set, const DebiasConfig& cfg);

}  // namespace vecbias
