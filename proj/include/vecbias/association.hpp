#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vecbias/cooccurrence.hpp"
#include "vecbias/embeddings.hpp"
#include "vecbias/relations.hpp"

namespace vecbias {

// Relational inner product association: the scalar projection of a word
// vector onto a unit relation vector. Sign follows the relation's pair order.
double ripa(const Vector& w, const RelationVector& relation);

// Corpus-expected RIPA as a function of the already-extracted statistics:
// (1/sqrt(lambda)) / sqrt(-cspmi(x,y) + alpha) * log[p(w|x)/p(w|y)].
double ripa_expected_from_stats(const ModelConstants& consts, double cspmi_xy, double log_ratio);

// Corpus-expected RIPA for an SGNS-style model.
double ripa_expected_sgns(const CooccurrenceTable& table, const ModelConstants& consts,
                          std::string_view w, std::string_view x, std::string_view y);

// GloVe variant. When a bias term is missing from `biases`, the log of the
// word's center-marginal count stands in; `used_log_count_fallback` reports
// that this happened.
double ripa_expected_glove(const CooccurrenceTable& table, const ModelConstants& consts,
                           const std::unordered_map<std::string, double>& biases,
                           std::string_view w, std::string_view x, std::string_view y,
                           bool* used_log_count_fallback = nullptr);

// <w, x - y> / ||x - y|| for one pair.
double pair_association(const EmbeddingSet& set, std::string_view w, std::string_view x,
                        std::string_view y);

// Mean of pair_association over the pair set.
double genderedness(const EmbeddingSet& set, std::string_view w, const WordPairSet& pairs);

// |mean g| - |mean g_hat| over per-pair values.
double delta_genderedness(const std::vector<double>& g_values,
                          const std::vector<double>& g_hat_values);

// Four non-empty, pairwise disjoint token sets; targets must be equal-sized
// for the partition test.
struct WeatInput {
  std::vector<std::string> targets1;
  std::vector<std::string> targets2;
  std::vector<std::string> attrs1;
  std::vector<std::string> attrs2;

  static WeatInput create(std::vector<std::string> targets1, std::vector<std::string> targets2,
                          std::vector<std::string> attrs1, std::vector<std::string> attrs2);
};

// Mean cosine against X minus mean cosine against Y; in [-2, 2].
double weat_s(const Vector& w, const std::vector<Vector>& X, const std::vector<Vector>& Y);

// [mean_{T1} s - mean_{T2} s] / population-std over T1 union T2. For
// singleton targets with distinct s this is exactly +-2.
double weat_effect_size(const WeatInput& input, const EmbeddingSet& set);

struct WeatPValue {
  double p;
  std::uint64_t n_partitions;  // partitions actually evaluated
  bool exhaustive;
};

// Fraction of equal-size partitions of T1 union T2 whose statistic is
// strictly greater than the observed one. Exhaustive when the partition
// count fits under max_exhaustive, otherwise seeded uniform sampling.
WeatPValue weat_p_value(const WeatInput& input, const EmbeddingSet& set,
                        std::uint64_t max_exhaustive = 100000, std::uint64_t samples = 100000,
                        std::uint64_t seed = 0);

struct WeatResult {
  double statistic;  // sum_{T1} s - sum_{T2} s
  double effect_size;
  double p_value;
  std::uint64_t n_partitions;
  bool exhaustive;
};

WeatResult weat_run(const WeatInput& input, const EmbeddingSet& set,
                    std::uint64_t max_exhaustive = 100000, std::uint64_t samples = 100000,
                    std::uint64_t seed = 0);

// Per-word association row of the corpus-vs-embedding comparison.
struct AssociationRow {
  std::string word;
  double g = 0.0;                 // embedding-space association
  std::optional<double> g_hat;    // corpus-expected association
  std::optional<double> delta_g;  // |g| - |g_hat|; present iff g_hat is
};

}  // namespace vecbias
