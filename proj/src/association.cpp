#include "vecbias/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "vecbias/error.hpp"
#include "vecbias/rng.hpp"

namespace vecbias {

double ripa(const Vector& w, const RelationVector& relation) {
  return scalar_projection(w, relation);
}

double ripa_expected_from_stats(const ModelConstants& consts, double cspmi_xy, double log_ratio) {
  consts.validate();
  const double denom_sq = -cspmi_xy + consts.alpha;
  if (!(denom_sq > 0.0)) {
    raise(ErrorCode::numeric, "degenerate pair separation: cspmi(x,y) >= alpha");
  }
  return (1.0 / std::sqrt(consts.lambda)) / std::sqrt(denom_sq) * log_ratio;
}

double ripa_expected_sgns(const CooccurrenceTable& table, const ModelConstants& consts,
                          std::string_view w, std::string_view x, std::string_view y) {
  return ripa_expected_from_stats(consts, table.cspmi(x, y), table.log_conditional_ratio(w, x, y));
}

double ripa_expected_glove(const CooccurrenceTable& table, const ModelConstants& consts,
                           const std::unordered_map<std::string, double>& biases,
                           std::string_view w, std::string_view x, std::string_view y,
                           bool* used_log_count_fallback) {
  consts.validate();
  if (used_log_count_fallback) *used_log_count_fallback = false;

  auto bias_for = [&](std::string_view token) {
    auto it = biases.find(std::string(token));
    if (it != biases.end()) return it->second;
    const std::uint64_t c = table.center_marginal(token);
    if (c == 0) {
      raise(ErrorCode::unobserved_pair,
            "no bias term and no counts for token '" + std::string(token) + "'");
    }
    if (used_log_count_fallback) *used_log_count_fallback = true;
    return std::log(static_cast<double>(c));
  };

  const double denom_sq = -table.cspmi(x, y) + consts.alpha;
  if (!(denom_sq > 0.0)) {
    raise(ErrorCode::numeric, "degenerate pair separation: cspmi(x,y) >= alpha");
  }
  const double c_factor = (1.0 / std::sqrt(consts.lambda)) / std::sqrt(denom_sq);

  // log[ p(x,w) / p(y,w) ]: the total-event normalizer cancels.
  const std::uint64_t cxw = table.count(x, w);
  const std::uint64_t cyw = table.count(y, w);
  if (cxw == 0 || cyw == 0) {
    raise(ErrorCode::unobserved_pair, "unobserved (x,w) or (y,w) pair");
  }
  const double log_prob_ratio = std::log(static_cast<double>(cxw) / static_cast<double>(cyw));
  return c_factor * (log_prob_ratio - bias_for(x) + bias_for(y));
}

double pair_association(const EmbeddingSet& set, std::string_view w, std::string_view x,
                        std::string_view y) {
  const Vector wv = set.vector_for(w);
  const Vector diff = set.vector_for(x) - set.vector_for(y);
  const double norm = diff.norm();
  if (norm == 0.0) {
    raise(ErrorCode::numeric, "zero difference vector for pair ('" + std::string(x) + "', '" +
                                  std::string(y) + "')");
  }
  return wv.dot(diff) / norm;
}

double genderedness(const EmbeddingSet& set, std::string_view w, const WordPairSet& pairs) {
  double sum = 0.0;
  for (const auto& [x, y] : pairs.pairs) sum += pair_association(set, w, x, y);
  return sum / static_cast<double>(pairs.size());
}

double delta_genderedness(const std::vector<double>& g_values,
                          const std::vector<double>& g_hat_values) {
  if (g_values.size() != g_hat_values.size()) {
    raise(ErrorCode::invalid_argument, "g and g_hat lists differ in length");
  }
  if (g_values.empty()) raise(ErrorCode::invalid_argument, "empty association lists");
  const double n = static_cast<double>(g_values.size());
  const double mean_g = std::accumulate(g_values.begin(), g_values.end(), 0.0) / n;
  const double mean_g_hat = std::accumulate(g_hat_values.begin(), g_hat_values.end(), 0.0) / n;
  return std::abs(mean_g) - std::abs(mean_g_hat);
}

WeatInput WeatInput::create(std::vector<std::string> targets1, std::vector<std::string> targets2,
                            std::vector<std::string> attrs1, std::vector<std::string> attrs2) {
  const std::vector<const std::vector<std::string>*> sets = {&targets1, &targets2, &attrs1,
                                                             &attrs2};
  const char* names[] = {"targets1", "targets2", "attrs1", "attrs2"};
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i]->empty()) {
      raise(ErrorCode::invalid_argument, std::string(names[i]) + " is empty");
    }
    for (const auto& w : *sets[i]) {
      if (!seen.insert(w).second) {
        raise(ErrorCode::invalid_argument, "word sets are not pairwise disjoint ('" + w + "')");
      }
    }
  }
  return WeatInput{std::move(targets1), std::move(targets2), std::move(attrs1), std::move(attrs2)};
}

namespace {

double cosine(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) raise(ErrorCode::numeric, "cosine undefined for zero vector");
  return a.dot(b) / (na * nb);
}

std::vector<Vector> resolve(const EmbeddingSet& set, const std::vector<std::string>& tokens) {
  std::vector<Vector> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(set.vector_for(t));
  return out;
}

// s(w, X, Y) for every target word, T1 first then T2.
std::vector<double> target_scores(const WeatInput& input, const EmbeddingSet& set) {
  const auto X = resolve(set, input.attrs1);
  const auto Y = resolve(set, input.attrs2);
  std::vector<double> scores;
  scores.reserve(input.targets1.size() + input.targets2.size());
  for (const auto& t : input.targets1) scores.push_back(weat_s(set.vector_for(t), X, Y));
  for (const auto& t : input.targets2) scores.push_back(weat_s(set.vector_for(t), X, Y));
  return scores;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (result > UINT64_MAX / num) return UINT64_MAX;
    result = result * num / i;  // exact: result*(n-k+i)/i is integral at each step
  }
  return result;
}

}  // namespace

double weat_s(const Vector& w, const std::vector<Vector>& X, const std::vector<Vector>& Y) {
  if (X.empty() || Y.empty()) raise(ErrorCode::invalid_argument, "empty attribute set");
  double sx = 0.0;
  for (const auto& x : X) sx += cosine(w, x);
  double sy = 0.0;
  for (const auto& y : Y) sy += cosine(w, y);
  return sx / static_cast<double>(X.size()) - sy / static_cast<double>(Y.size());
}

double weat_effect_size(const WeatInput& input, const EmbeddingSet& set) {
  const auto scores = target_scores(input, set);
  const std::size_t n1 = input.targets1.size();
  const std::size_t n2 = input.targets2.size();

  if (n1 == 1 && n2 == 1) {
    // Population std of two values is |s1 - s2| / 2, so the ratio is exactly
    // +-2 whenever the scores differ.
    if (scores[0] == scores[1]) raise(ErrorCode::numeric, "degenerate: equal target scores");
    return scores[0] > scores[1] ? 2.0 : -2.0;
  }

  const double mean1 =
      std::accumulate(scores.begin(), scores.begin() + n1, 0.0) / static_cast<double>(n1);
  const double mean2 =
      std::accumulate(scores.begin() + n1, scores.end(), 0.0) / static_cast<double>(n2);
  const double mean_all =
      std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean_all) * (s - mean_all);
  var /= static_cast<double>(scores.size());
  const double sd = std::sqrt(var);
  if (sd == 0.0) raise(ErrorCode::numeric, "degenerate: zero variance of association scores");
  return (mean1 - mean2) / sd;
}

WeatPValue weat_p_value(const WeatInput& input, const EmbeddingSet& set,
                        std::uint64_t max_exhaustive, std::uint64_t samples, std::uint64_t seed) {
  const std::size_t t = input.targets1.size();
  if (t != input.targets2.size()) {
    raise(ErrorCode::invalid_argument, "targets must be equal-sized for the partition test");
  }
  const auto scores = target_scores(input, set);
  const std::size_t pool = scores.size();  // 2t

  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);

  // statistic(T1') = 2 * sum(T1') - total
  auto partition_statistic = [&](double sum_t1) { return 2.0 * sum_t1 - total; };

  // The observed value goes through the same expression as the partition
  // statistics; evaluating it as sum(T1) - sum(T2) instead can differ by an
  // ulp and make the identity partition count as strictly greater.
  const double observed =
      partition_statistic(std::accumulate(scores.begin(), scores.begin() + t, 0.0));

  const std::uint64_t n_partitions = binomial_saturating(pool, t);
  if (n_partitions <= max_exhaustive) {
    std::vector<std::size_t> comb(t);
    for (std::size_t i = 0; i < t; ++i) comb[i] = i;
    std::uint64_t greater = 0;
    std::uint64_t visited = 0;
    for (;;) {
      double sum_t1 = 0.0;
      for (std::size_t idx : comb) sum_t1 += scores[idx];
      if (partition_statistic(sum_t1) > observed) ++greater;
      ++visited;
      // next lexicographic combination
      std::size_t i = t;
      while (i > 0) {
        --i;
        if (comb[i] != i + pool - t) break;
        if (i == 0) {
          i = t;
          break;
        }
      }
      if (i == t) break;
      ++comb[i];
      for (std::size_t j = i + 1; j < t; ++j) comb[j] = comb[j - 1] + 1;
    }
    return WeatPValue{static_cast<double>(greater) / static_cast<double>(visited), visited, true};
  }

  Rng rng(seed);
  std::vector<std::size_t> idx(pool);
  std::uint64_t greater = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = pool - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
      std::swap(idx[i], idx[j]);
    }
    double sum_t1 = 0.0;
    for (std::size_t i = 0; i < t; ++i) sum_t1 += scores[idx[i]];
    if (partition_statistic(sum_t1) > observed) ++greater;
  }
  return WeatPValue{static_cast<double>(greater) / static_cast<double>(samples), samples, false};
}

WeatResult weat_run(const WeatInput& input, const EmbeddingSet& set, std::uint64_t max_exhaustive,
                    std::uint64_t samples, std::uint64_t seed) {
  const auto scores = target_scores(input, set);
  const std::size_t n1 = input.targets1.size();
  const double statistic = std::accumulate(scores.begin(), scores.begin() + n1, 0.0) -
                           std::accumulate(scores.begin() + n1, scores.end(), 0.0);
  const double effect = weat_effect_size(input, set);
  const auto p = weat_p_value(input, set, max_exhaustive, samples, seed);
  return WeatResult{statistic, effect, p.p, p.n_partitions, p.exhaustive};
}

}  // namespace vecbias
