#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vecbias/analogy.hpp"
#include "vecbias/association.hpp"
#include "vecbias/cooccurrence.hpp"
#include "vecbias/debias.hpp"
#include "vecbias/embeddings.hpp"
#include "vecbias/factorization.hpp"
#include "vecbias/relations.hpp"

namespace vecbias {

struct CategoryList {
  std::string name;
  std::vector<std::string> words;
};

struct BreakdownRow {
  std::string word;
  std::string category;
  std::optional<double> g;
  std::optional<double> g_hat;
  std::optional<double> delta_g;
  std::string flag;  // "", not_in_vocabulary, insufficient_counts, degenerate_pairs
};

struct CategorySummary {
  std::string category;
  int words_total = 0;
  int words_used = 0;
  int words_flagged = 0;
  std::optional<double> mean_abs_g;
  std::optional<double> mean_abs_g_hat;
  std::optional<double> mean_delta_g;
  std::optional<double> bootstrap_p;  // two-sided, seeded resampling of delta_g
};

struct BreakdownReport {
  std::vector<BreakdownRow> rows;
  std::vector<CategorySummary> summaries;
};

// Per-word embedding association g, corpus-expected g_hat, and delta_g for
// every category word. Flagged words keep their row but stay out of every
// mean and out of the bootstrap.
BreakdownReport breakdown(const EmbeddingSet& set, const CooccurrenceTable& table,
                          const WordPairSet& pairs, const std::vector<CategoryList>& categories,
                          const ModelConstants& consts, std::uint64_t seed,
                          int bootstrap_rounds = 10000);

// Renderers produce the complete file contents. header_lines carry the
// resolved run configuration; CSVs print them as leading '#' comments, JSON
// reports embed them under "config".
std::string render_ripa_csv(const EmbeddingSet& set, const WordPairSet& pairs,
                            const std::vector<std::string>& words,
                            const std::vector<std::string>& header_lines);

std::string render_weat_json(const WeatResult& result,
                             const std::vector<std::string>& header_lines);

std::string render_breakdown_csv(const BreakdownReport& report,
                                 const std::vector<std::string>& header_lines);

std::string render_debias_report(const DebiasOutcome& outcome, const DebiasConfig& cfg,
                                 const std::vector<std::string>& header_lines);

std::string render_curves_csv(const AnalogyCurves& curves,
                              const std::vector<std::string>& header_lines);

std::string render_verify_json(const VerifyReport& report, const VerifyOptions& opts,
                               const std::vector<std::string>& header_lines);

std::string render_pair_stats_csv(const CooccurrenceTable& table, const WordPairSet& pairs,
                                  const std::vector<std::string>& header_lines);

}  // namespace vecbias
