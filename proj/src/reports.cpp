#include "vecbias/reports.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "vecbias/error.hpp"
#include "vecbias/rng.hpp"

namespace vecbias {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_field(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

void append_headers(std::ostringstream& out, const std::vector<std::string>& header_lines) {
  for (const auto& line : header_lines) out << "# " << line << '\n';
}

// Two-sided resampling p-value for "mean delta_g differs from zero":
// 2 * min(P(mean <= 0), P(mean >= 0)) with the +1 smoothing that keeps it
// strictly positive, capped at 1.
double bootstrap_p_value(const std::vector<double>& values, int rounds, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = values.size();
  std::uint64_t le = 0, ge = 0;
  for (int round = 0; round < rounds; ++round) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[rng.next_below(n)];
    const double mean = sum / static_cast<double>(n);
    if (mean <= 0.0) ++le;
    if (mean >= 0.0) ++ge;
  }
  const double denom = static_cast<double>(rounds) + 1.0;
  const double p = 2.0 * std::min((static_cast<double>(le) + 1.0) / denom,
                                  (static_cast<double>(ge) + 1.0) / denom);
  return std::min(p, 1.0);
}

}  // namespace

BreakdownReport breakdown(const EmbeddingSet& set, const CooccurrenceTable& table,
                          const WordPairSet& pairs, const std::vector<CategoryList>& categories,
                          const ModelConstants& consts, std::uint64_t seed,
                          int bootstrap_rounds) {
  consts.validate();
  if (categories.empty()) raise(ErrorCode::invalid_argument, "no categories");
  if (bootstrap_rounds < 1) raise(ErrorCode::invalid_argument, "bootstrap rounds must be >= 1");
  difference_vectors(set, pairs);  // all pair tokens must resolve up front

  BreakdownReport report;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const auto& category = categories[c];
    CategorySummary summary;
    summary.category = category.name;
    summary.words_total = static_cast<int>(category.words.size());

    std::vector<double> abs_g, abs_g_hat, delta;
    for (const auto& word : category.words) {
      BreakdownRow row;
      row.word = word;
      row.category = category.name;

      if (!set.lookup(word)) {
        row.flag = "not_in_vocabulary";
        report.rows.push_back(std::move(row));
        continue;
      }

      std::vector<double> g_per_pair, g_hat_per_pair;
      for (const auto& [x, y] : pairs.pairs) {
        g_per_pair.push_back(pair_association(set, word, x, y));
      }
      row.g = std::accumulate(g_per_pair.begin(), g_per_pair.end(), 0.0) /
              static_cast<double>(g_per_pair.size());

      try {
        for (const auto& [x, y] : pairs.pairs) {
          g_hat_per_pair.push_back(ripa_expected_sgns(table, consts, word, x, y));
        }
        row.g_hat = std::accumulate(g_hat_per_pair.begin(), g_hat_per_pair.end(), 0.0) /
                    static_cast<double>(g_hat_per_pair.size());
        row.delta_g = delta_genderedness(g_per_pair, g_hat_per_pair);
      } catch (const Error& e) {
        row.g_hat.reset();
        row.delta_g.reset();
        row.flag = e.code() == ErrorCode::numeric ? "degenerate_pairs" : "insufficient_counts";
      }

      if (row.delta_g) {
        abs_g.push_back(std::abs(*row.g));
        abs_g_hat.push_back(std::abs(*row.g_hat));
        delta.push_back(*row.delta_g);
      }
      report.rows.push_back(std::move(row));
    }

    summary.words_used = static_cast<int>(delta.size());
    summary.words_flagged = summary.words_total - summary.words_used;
    if (!delta.empty()) {
      const double n = static_cast<double>(delta.size());
      summary.mean_abs_g = std::accumulate(abs_g.begin(), abs_g.end(), 0.0) / n;
      summary.mean_abs_g_hat = std::accumulate(abs_g_hat.begin(), abs_g_hat.end(), 0.0) / n;
      summary.mean_delta_g = std::accumulate(delta.begin(), delta.end(), 0.0) / n;
      summary.bootstrap_p = bootstrap_p_value(delta, bootstrap_rounds, mix_seed(seed, c));
    }
    report.summaries.push_back(std::move(summary));
  }
  return report;
}

std::string render_ripa_csv(const EmbeddingSet& set, const WordPairSet& pairs,
                            const std::vector<std::string>& words,
                            const std::vector<std::string>& header_lines) {
  const RelationVector relation = relation_from_pairs(set, pairs);
  std::ostringstream out;
  append_headers(out, header_lines);
  out << "word,beta\n";
  for (const auto& word : words) {
    out << word << ',' << format_double(ripa(set.vector_for(word), relation)) << '\n';
  }
  return out.str();
}

std::string render_weat_json(const WeatResult& result,
                             const std::vector<std::string>& header_lines) {
  ordered_json doc;
  doc["statistic"] = result.statistic;
  doc["effect_size"] = result.effect_size;
  doc["p_value"] = result.p_value;
  doc["n_partitions"] = result.n_partitions;
  doc["exhaustive"] = result.exhaustive;
  doc["convention"] = "strictly-greater";
  doc["config"] = header_lines;
  return doc.dump(2) + "\n";
}

std::string render_breakdown_csv(const BreakdownReport& report,
                                 const std::vector<std::string>& header_lines) {
  std::ostringstream out;
  append_headers(out, header_lines);
  out << "word,category,g,g_hat,delta_g,flag\n";
  for (const auto& row : report.rows) {
    out << row.word << ',' << row.category << ',' << csv_field(row.g) << ','
        << csv_field(row.g_hat) << ',' << csv_field(row.delta_g) << ',' << row.flag << '\n';
  }
  for (const auto& s : report.summaries) {
    out << "# summary category=" << s.category << " words=" << s.words_total
        << " used=" << s.words_used << " flagged=" << s.words_flagged;
    if (s.mean_abs_g) {
      out << " mean_abs_g=" << format_double(*s.mean_abs_g)
          << " mean_abs_g_hat=" << format_double(*s.mean_abs_g_hat)
          << " mean_delta_g=" << format_double(*s.mean_delta_g)
          << " bootstrap_p=" << format_double(*s.bootstrap_p);
    }
    out << '\n';
  }
  out << "# bootstrap_p is this tool's own convention: seeded resampling of per-word delta_g\n";
  return out.str();
}

std::string render_debias_report(const DebiasOutcome& outcome, const DebiasConfig& cfg,
                                 const std::vector<std::string>& header_lines) {
  ordered_json doc;
  doc["mode"] = subspace_mode_name(cfg.mode);
  doc["selector"] = selector_mode_name(cfg.selector);
  doc["subspace_rank"] = outcome.subspace_rank;
  doc["debiased_words"] = outcome.debiased_count;
  doc["protected_words"] = outcome.protected_words;
  doc["max_abs_inner"] = outcome.max_abs_inner;
  doc["max_scaled_inner"] = outcome.max_scaled_inner;
  doc["config"] = header_lines;
  return doc.dump(2) + "\n";
}

std::string render_curves_csv(const AnalogyCurves& curves,
                              const std::vector<std::string>& header_lines) {
  std::ostringstream out;
  append_headers(out, header_lines);
  const auto& grid = curves.appropriate.thresholds;
  if (std::find(grid.begin(), grid.end(), 0.5) != grid.end()) {
    for (const auto* curve : {&curves.appropriate, &curves.biased}) {
      out << "# preserved_fraction_at_0.5 " << analogy_label_name(curve->label) << '='
          << format_double(AnalogyCurves::preserved_fraction(*curve, 0.5)) << '\n';
    }
  }
  out << "label,threshold,count_before,count_after,fraction_after\n";
  for (const auto* curve : {&curves.appropriate, &curves.biased}) {
    for (std::size_t i = 0; i < curve->thresholds.size(); ++i) {
      const double fraction =
          curve->count_before[i] == 0
              ? 1.0
              : static_cast<double>(curve->count_after[i]) /
                    static_cast<double>(curve->count_before[i]);
      out << analogy_label_name(curve->label) << ',' << format_double(curve->thresholds[i]) << ','
          << curve->count_before[i] << ',' << curve->count_after[i] << ','
          << format_double(fraction) << '\n';
    }
  }
  return out.str();
}

namespace {

ordered_json instance_json(const InstanceResult& r) {
  ordered_json doc;
  doc["n"] = r.n;
  doc["d"] = r.d;
  doc["pairs"] = r.pairs;
  doc["lambda"] = r.lambda;
  doc["max_residual"] = r.max_residual;
  doc["tolerance"] = r.tolerance;
  doc["max_s_row_delta"] = r.max_s_row_delta;
  doc["pass"] = r.pass;
  return doc;
}

}  // namespace

std::string render_verify_json(const VerifyReport& report, const VerifyOptions& opts,
                               const std::vector<std::string>& header_lines) {
  ordered_json doc;
  doc["pass"] = report.pass;
  doc["instances"] = opts.instances;
  doc["seed"] = opts.seed;
  doc["tamper"] = opts.tamper;

  ordered_json theorem = ordered_json::array();
  for (const auto& r : report.theorem_instances) theorem.push_back(instance_json(r));
  doc["theorem_instances"] = std::move(theorem);

  ordered_json grid = ordered_json::array();
  for (const auto& r : report.lambda_grid) grid.push_back(instance_json(r));
  doc["lambda_grid"] = std::move(grid);

  ordered_json prop1 = ordered_json::array();
  for (const auto& p : report.prop1_grid) {
    ordered_json point;
    point["ratio"] = p.ratio;
    point["cos_diff"] = p.cos_diff;
    point["equal_freq"] = p.equal_freq;
    point["pass"] = p.pass;
    prop1.push_back(std::move(point));
  }
  doc["prop1_grid"] = std::move(prop1);
  doc["config"] = header_lines;
  return doc.dump(2) + "\n";
}

std::string render_pair_stats_csv(const CooccurrenceTable& table, const WordPairSet& pairs,
                                  const std::vector<std::string>& header_lines) {
  std::ostringstream out;
  append_headers(out, header_lines);
  out << "x,y,count,pmi,cspmi\n";
  for (const auto& [x, y] : pairs.pairs) {
    const std::uint64_t count = table.count(x, y);
    out << x << ',' << y << ',' << count << ',';
    if (count > 0) {
      out << format_double(table.pmi(x, y)) << ',' << format_double(table.cspmi(x, y));
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace vecbias
