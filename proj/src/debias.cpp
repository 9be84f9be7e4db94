#include "vecbias/debias.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "vecbias/error.hpp"

namespace vecbias {

SubspaceMode subspace_mode_from_name(std::string_view name) {
  if (name == "span") return SubspaceMode::span;
  if (name == "pc1") return SubspaceMode::pc1;
  raise(ErrorCode::invalid_argument, "unknown subspace mode '" + std::string(name) + "'");
}

SelectorMode selector_mode_from_name(std::string_view name) {
  if (name == "none") return SelectorMode::none;
  if (name == "list") return SelectorMode::list;
  if (name == "unsupervised") return SelectorMode::unsupervised;
  raise(ErrorCode::invalid_argument, "unknown selector '" + std::string(name) + "'");
}

const char* subspace_mode_name(SubspaceMode mode) {
  return mode == SubspaceMode::span ? "span" : "pc1";
}

const char* selector_mode_name(SelectorMode mode) {
  switch (mode) {
    case SelectorMode::none:
      return "none";
    case SelectorMode::list:
      return "list";
    default:
      return "unsupervised";
  }
}

void DebiasConfig::validate() const {
  if (pairs.pairs.empty()) raise(ErrorCode::invalid_argument, "no defining pairs");
  if (selector == SelectorMode::unsupervised && biased_pairs.pairs.empty()) {
    raise(ErrorCode::invalid_argument, "unsupervised selector needs biased pairs");
  }
  if (selector == SelectorMode::list && protected_words.empty()) {
    raise(ErrorCode::invalid_argument, "selector 'list' needs a protected word list");
  }
}

Vector debias_word(const Vector& w, const BiasSubspace& subspace) {
  if (w.size() != subspace.dim()) {
    raise(ErrorCode::invalid_argument, "vector and subspace dimensions differ");
  }
  return w - project_onto(w, subspace);
}

std::vector<std::string> select_appropriate(const EmbeddingSet& set, const DebiasConfig& cfg) {
  if (cfg.selector != SelectorMode::unsupervised) {
    raise(ErrorCode::invalid_argument, "selector is not 'unsupervised'");
  }
  cfg.validate();
  const RelationVector b_star = relation_from_pairs(set, cfg.pairs);
  const RelationVector b_prime = relation_from_pairs(set, cfg.biased_pairs);

  std::vector<std::string> protected_words;
  for (int i = 0; i < set.size(); ++i) {
    const Vector w = set.row(i);
    if (std::abs(scalar_projection(w, b_star)) >= std::abs(scalar_projection(w, b_prime))) {
      protected_words.push_back(set.vocab.token(i));
    }
  }
  return protected_words;
}

DebiasOutcome debias_embedding(const EmbeddingSet& set, const DebiasConfig& cfg) {
  cfg.validate();

  BiasSubspace subspace;
  if (cfg.mode == SubspaceMode::span) {
    subspace = span_from_pairs(set, cfg.pairs);
  } else {
    const RelationVector pc1 = relation_from_pairs(set, cfg.pairs);
    subspace.basis.resize(1, pc1.dim());
    subspace.basis.row(0) = pc1.direction;
  }

  std::unordered_set<std::string> untouched;
  for (const auto& [x, y] : cfg.pairs.pairs) {
    untouched.insert(x);
    untouched.insert(y);
  }
  for (const auto& w : cfg.protected_words) untouched.insert(w);
  if (cfg.selector == SelectorMode::unsupervised) {
    for (auto& w : select_appropriate(set, cfg)) untouched.insert(std::move(w));
  }

  DebiasOutcome out;
  out.subspace_rank = subspace.rank();
  out.embeddings.vocab = set.vocab;
  out.embeddings.dim = set.dim;
  out.embeddings.matrix.resize(set.matrix.rows(), set.matrix.cols());

  const int n = set.size();
  std::vector<char> debiased(n, 0);
  auto process_rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      if (untouched.count(set.vocab.token(i))) {
        out.embeddings.matrix.row(i) = set.matrix.row(i);
      } else {
        out.embeddings.matrix.row(i) = debias_word(set.row(i), subspace);
        debiased[i] = 1;
      }
    }
  };

  const int min_rows_per_thread = 2048;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int threads = std::max(1, std::min(hw, n / min_rows_per_thread));
  if (threads == 1) {
    process_rows(0, n);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back(process_rows, n * t / threads, n * (t + 1) / threads);
    }
    for (auto& w : workers) w.join();
  }

  const auto diffs = difference_vectors(set, cfg.pairs);
  for (int i = 0; i < n; ++i) {
    if (!debiased[i]) continue;
    ++out.debiased_count;
    const double w_norm = set.row(i).norm();
    for (const auto& d : diffs) {
      const double inner = std::abs(out.embeddings.row(i).dot(d));
      out.max_abs_inner = std::max(out.max_abs_inner, inner);
      const double scale = w_norm * d.norm();
      if (scale > 0.0) {
        out.max_scaled_inner = std::max(out.max_scaled_inner, inner / scale);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (untouched.count(set.vocab.token(i))) out.protected_words.push_back(set.vocab.token(i));
  }
  return out;
}

}  // namespace vecbias
