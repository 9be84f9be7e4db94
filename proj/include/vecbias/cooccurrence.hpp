#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vecbias/embeddings.hpp"
#include "vecbias/types.hpp"

namespace vecbias {

// Model-specific scalars of the corpus-expected association formulas.
struct ModelConstants {
  double lambda = 1.0;  // context/word matrix scale, > 0
  double alpha = -1.0;  // norm offset, < 0
  int k = 1;            // negative-sampling shift, >= 1

  void validate() const;
};

// Directional (center, context) event counts from a symmetric unweighted
// window over a whitespace-tokenized stream. Every event is mirrored, so
// counts(a,b) == counts(b,a) for counted corpora. Queries on a finished
// table are read-only and freely concurrent.
class CooccurrenceTable {
 public:
  struct Entry {
    std::string center;
    std::string context;
    std::uint64_t count;
  };

  // One event per ordered position pair (i, j), 0 < |i - j| <= window.
  // shards > 1 splits the center positions across threads; the merged result
  // is identical to the single-threaded count.
  static CooccurrenceTable count_tokens(const std::vector<std::string>& tokens, int window,
                                        int shards = 1);
  static CooccurrenceTable count_text(const std::string& text, int window, int shards = 1);
  static CooccurrenceTable count_file(const std::string& path, int window, bool lowercase = false,
                                      int shards = 1);

  static CooccurrenceTable from_entries(int window, const std::vector<Entry>& entries);

  // TSV "center<TAB>context<TAB>count" with a "# window=... total_events=..."
  // header line; rows sorted by (center, context).
  static CooccurrenceTable load(const std::string& path);
  void save(const std::string& path) const;

  // Adds another table's events into this one. Windows must match.
  void merge(const CooccurrenceTable& other);

  int window() const { return window_; }
  std::uint64_t total_events() const { return total_; }
  std::uint64_t count(std::string_view center, std::string_view context) const;
  std::uint64_t center_marginal(std::string_view token) const;
  std::uint64_t context_marginal(std::string_view token) const;
  const Vocabulary& vocab() const { return vocab_; }

  // log[ p(x,w) / (p(x) p(w)) ], natural log. Unobserved pairs are errors,
  // never -inf.
  double pmi(std::string_view x, std::string_view w) const;

  // pmi(x,y) + log p(x,y).
  double cspmi(std::string_view x, std::string_view y) const;

  // log[ p(w|x) / p(w|y) ] with p(w|x) = counts(x,w) / center_marginal(x).
  double log_conditional_ratio(std::string_view w, std::string_view x, std::string_view y) const;

  // M[i][j] = pmi(w_i, w_j) - log k over the subset, built from symmetrized
  // counts and marginals so M is symmetric entry for entry.
  Eigen::MatrixXd shifted_pmi_matrix(const std::vector<std::string>& vocab_subset, int k) const;

  std::vector<Entry> sorted_entries() const;

 private:
  std::uint64_t count_ids(int center, int context) const;
  void add_event(int center, int context, std::uint64_t n);
  int require_token(std::string_view token) const;

  int window_ = 1;
  Vocabulary vocab_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
  std::vector<std::uint64_t> center_marginals_;
  std::vector<std::uint64_t> context_marginals_;
  std::uint64_t total_ = 0;
};

}  // namespace vecbias
