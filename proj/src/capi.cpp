#include "vecbias/vecbias.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "vecbias/analogy.hpp"
#include "vecbias/association.hpp"
#include "vecbias/cooccurrence.hpp"
#include "vecbias/debias.hpp"
#include "vecbias/embeddings.hpp"
#include "vecbias/error.hpp"
#include "vecbias/factorization.hpp"
#include "vecbias/relations.hpp"
#include "vecbias/reports.hpp"
#include "vecbias/wordlist.hpp"

struct vb_embeddings {
  vecbias::EmbeddingSet rep;
};
struct vb_pairs {
  vecbias::WordPairSet rep;
};
struct vb_wordlist {
  std::vector<std::string> rep;
};
struct vb_cooc {
  vecbias::CooccurrenceTable rep;
};
struct vb_analogies {
  std::vector<vecbias::AnalogyQuad> rep;
};

namespace {

thread_local std::string g_last_error;

vb_status map_code(vecbias::ErrorCode code) {
  switch (code) {
    case vecbias::ErrorCode::io:
      return VB_ERR_IO;
    case vecbias::ErrorCode::parse:
      return VB_ERR_PARSE;
    case vecbias::ErrorCode::invalid_argument:
      return VB_ERR_INVALID_ARGUMENT;
    case vecbias::ErrorCode::not_found:
      return VB_ERR_NOT_FOUND;
    case vecbias::ErrorCode::unobserved_pair:
      return VB_ERR_UNOBSERVED_PAIR;
    case vecbias::ErrorCode::numeric:
      return VB_ERR_NUMERIC;
  }
  return VB_ERR_INTERNAL;
}

template <typename Fn>
vb_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return VB_OK;
  } catch (const vecbias::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return VB_ERR_INTERNAL;
  }
}

vb_status fail_invalid(const char* message) {
  g_last_error = message;
  return VB_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* buffer = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buffer) return nullptr;
  std::memcpy(buffer, s.data(), s.size() + 1);
  return buffer;
}

vb_status emit_string(const std::string& s, char** out) {
  char* buffer = copy_string(s);
  if (!buffer) {
    g_last_error = "out of memory";
    return VB_ERR_INTERNAL;
  }
  *out = buffer;
  return VB_OK;
}

std::vector<std::string> collect_lines(const char* const* lines, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.emplace_back(lines[i] ? lines[i] : "");
  return out;
}

bool valid_lines(const char* const* lines, int n) { return n == 0 || lines != nullptr; }

vecbias::WeatInput make_weat_input(const vb_wordlist* t1, const vb_wordlist* t2,
                                   const vb_wordlist* a1, const vb_wordlist* a2) {
  return vecbias::WeatInput::create(t1->rep, t2->rep, a1->rep, a2->rep);
}

}  // namespace

extern "C" {

const char* vb_status_name(vb_status status) {
  switch (status) {
    case VB_OK:
      return "ok";
    case VB_ERR_IO:
      return "io error";
    case VB_ERR_PARSE:
      return "parse error";
    case VB_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case VB_ERR_NOT_FOUND:
      return "not found";
    case VB_ERR_UNOBSERVED_PAIR:
      return "unobserved pair";
    case VB_ERR_NUMERIC:
      return "numeric error";
    default:
      return "internal error";
  }
}

const char* vb_last_error(void) { return g_last_error.c_str(); }

void vb_string_free(char* s) { std::free(s); }

const char* vb_version(void) { return "0.1.0"; }

/* ---- embeddings ------------------------------------------------------- */

vb_status vb_embeddings_load(const char* path, const char* format, vb_embeddings** out) {
  if (!path || !format || !out) return fail_invalid("null argument");
  return wrap([&] {
    auto set = vecbias::load_embeddings(path, vecbias::embedding_format_from_name(format));
    *out = new vb_embeddings{std::move(set)};
  });
}

vb_status vb_embeddings_create(const char* const* words, int n_words, int dim,
                               const double* row_major_data, vb_embeddings** out) {
  if (!words || !row_major_data || !out) return fail_invalid("null argument");
  if (n_words < 1 || dim < 1) return fail_invalid("need n_words >= 1 and dim >= 1");
  return wrap([&] {
    vecbias::EmbeddingSet set;
    set.dim = dim;
    set.matrix.resize(n_words, dim);
    for (int i = 0; i < n_words; ++i) {
      if (!words[i]) vecbias::raise(vecbias::ErrorCode::invalid_argument, "null token");
      set.vocab.add(words[i]);
      for (int j = 0; j < dim; ++j) set.matrix(i, j) = row_major_data[i * dim + j];
    }
    *out = new vb_embeddings{std::move(set)};
  });
}

vb_status vb_embeddings_save(const vb_embeddings* set, const char* path, const char* format) {
  if (!set || !path || !format) return fail_invalid("null argument");
  return wrap([&] {
    vecbias::save_embeddings(set->rep, path, vecbias::embedding_format_from_name(format));
  });
}

void vb_embeddings_free(vb_embeddings* set) { delete set; }

int vb_embeddings_size(const vb_embeddings* set) { return set ? set->rep.size() : 0; }

int vb_embeddings_dim(const vb_embeddings* set) { return set ? set->rep.dim : 0; }

const char* vb_embeddings_word(const vb_embeddings* set, int index) {
  if (!set || index < 0 || index >= set->rep.size()) return nullptr;
  return set->rep.vocab.token(index).c_str();
}

vb_status vb_embeddings_vector(const vb_embeddings* set, const char* token, double* out_vector) {
  if (!set || !token || !out_vector) return fail_invalid("null argument");
  return wrap([&] {
    const vecbias::Vector v = set->rep.vector_for(token);
    for (int i = 0; i < v.size(); ++i) out_vector[i] = v(i);
  });
}

/* ---- word pairs and word lists ---------------------------------------- */

vb_status vb_pairs_load(const char* path, vb_pairs** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new vb_pairs{vecbias::load_word_pairs(path)}; });
}

vb_status vb_pairs_create(const char* const* firsts, const char* const* seconds, int n_pairs,
                          vb_pairs** out) {
  if (!firsts || !seconds || !out) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < n_pairs; ++i) {
      if (!firsts[i] || !seconds[i]) {
        vecbias::raise(vecbias::ErrorCode::invalid_argument, "null token");
      }
      pairs.emplace_back(firsts[i], seconds[i]);
    }
    *out = new vb_pairs{vecbias::WordPairSet::from_pairs(std::move(pairs))};
  });
}

vb_status vb_pairs_default_gender(vb_pairs** out) {
  if (!out) return fail_invalid("null argument");
  return wrap([&] { *out = new vb_pairs{vecbias::default_gender_pairs()}; });
}

void vb_pairs_free(vb_pairs* pairs) { delete pairs; }

int vb_pairs_size(const vb_pairs* pairs) {
  return pairs ? static_cast<int>(pairs->rep.size()) : 0;
}

const char* vb_pairs_first(const vb_pairs* pairs, int index) {
  if (!pairs || index < 0 || index >= static_cast<int>(pairs->rep.size())) return nullptr;
  return pairs->rep.pairs[index].first.c_str();
}

const char* vb_pairs_second(const vb_pairs* pairs, int index) {
  if (!pairs || index < 0 || index >= static_cast<int>(pairs->rep.size())) return nullptr;
  return pairs->rep.pairs[index].second.c_str();
}

vb_status vb_wordlist_load(const char* path, vb_wordlist** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new vb_wordlist{vecbias::load_wordlist(path)}; });
}

vb_status vb_wordlist_create(const char* const* words, int n_words, vb_wordlist** out) {
  if (!words || !out) return fail_invalid("null argument");
  return wrap([&] {
    std::vector<std::string> list;
    for (int i = 0; i < n_words; ++i) {
      if (!words[i]) vecbias::raise(vecbias::ErrorCode::invalid_argument, "null token");
      list.emplace_back(words[i]);
    }
    *out = new vb_wordlist{std::move(list)};
  });
}

void vb_wordlist_free(vb_wordlist* list) { delete list; }

int vb_wordlist_size(const vb_wordlist* list) {
  return list ? static_cast<int>(list->rep.size()) : 0;
}

const char* vb_wordlist_word(const vb_wordlist* list, int index) {
  if (!list || index < 0 || index >= static_cast<int>(list->rep.size())) return nullptr;
  return list->rep[index].c_str();
}

/* ---- co-occurrence statistics ------------------------------------------ */

vb_status vb_cooc_count_file(const char* path, int window, int lowercase, int shards,
                             vb_cooc** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] {
    *out = new vb_cooc{
        vecbias::CooccurrenceTable::count_file(path, window, lowercase != 0, shards)};
  });
}

vb_status vb_cooc_load(const char* path, vb_cooc** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new vb_cooc{vecbias::CooccurrenceTable::load(path)}; });
}

vb_status vb_cooc_save(const vb_cooc* table, const char* path) {
  if (!table || !path) return fail_invalid("null argument");
  return wrap([&] { table->rep.save(path); });
}

void vb_cooc_free(vb_cooc* table) { delete table; }

int vb_cooc_window(const vb_cooc* table) { return table ? table->rep.window() : 0; }

uint64_t vb_cooc_total_events(const vb_cooc* table) {
  return table ? table->rep.total_events() : 0;
}

uint64_t vb_cooc_count(const vb_cooc* table, const char* center, const char* context) {
  if (!table || !center || !context) return 0;
  return table->rep.count(center, context);
}

vb_status vb_cooc_pmi(const vb_cooc* table, const char* x, const char* w, double* out) {
  if (!table || !x || !w || !out) return fail_invalid("null argument");
  return wrap([&] { *out = table->rep.pmi(x, w); });
}

vb_status vb_cooc_cspmi(const vb_cooc* table, const char* x, const char* y, double* out) {
  if (!table || !x || !y || !out) return fail_invalid("null argument");
  return wrap([&] { *out = table->rep.cspmi(x, y); });
}

vb_status vb_cooc_log_conditional_ratio(const vb_cooc* table, const char* w, const char* x,
                                        const char* y, double* out) {
  if (!table || !w || !x || !y || !out) return fail_invalid("null argument");
  return wrap([&] { *out = table->rep.log_conditional_ratio(w, x, y); });
}

/* ---- association scores ------------------------------------------------ */

vb_status vb_ripa(const vb_embeddings* set, const vb_pairs* pairs, const char* word, double* out) {
  if (!set || !pairs || !word || !out) return fail_invalid("null argument");
  return wrap([&] {
    const vecbias::RelationVector relation =
        vecbias::relation_from_pairs(set->rep, pairs->rep);
    *out = vecbias::ripa(set->rep.vector_for(word), relation);
  });
}

vb_status vb_pair_association(const vb_embeddings* set, const char* word, const char* x,
                              const char* y, double* out) {
  if (!set || !word || !x || !y || !out) return fail_invalid("null argument");
  return wrap([&] { *out = vecbias::pair_association(set->rep, word, x, y); });
}

vb_status vb_genderedness(const vb_embeddings* set, const char* word, const vb_pairs* pairs,
                          double* out) {
  if (!set || !word || !pairs || !out) return fail_invalid("null argument");
  return wrap([&] { *out = vecbias::genderedness(set->rep, word, pairs->rep); });
}

vb_status vb_ripa_expected_sgns(const vb_cooc* table, double lambda, double alpha, int k,
                                const char* w, const char* x, const char* y, double* out) {
  if (!table || !w || !x || !y || !out) return fail_invalid("null argument");
  return wrap([&] {
    const vecbias::ModelConstants consts{lambda, alpha, k};
    *out = vecbias::ripa_expected_sgns(table->rep, consts, w, x, y);
  });
}

vb_status vb_weat(const vb_embeddings* set, const vb_wordlist* targets1,
                  const vb_wordlist* targets2, const vb_wordlist* attrs1,
                  const vb_wordlist* attrs2, uint64_t max_exhaustive, uint64_t samples,
                  uint64_t seed, vb_weat_result* out) {
  if (!set || !targets1 || !targets2 || !attrs1 || !attrs2 || !out) {
    return fail_invalid("null argument");
  }
  return wrap([&] {
    const auto input = make_weat_input(targets1, targets2, attrs1, attrs2);
    const auto result = vecbias::weat_run(input, set->rep, max_exhaustive, samples, seed);
    out->statistic = result.statistic;
    out->effect_size = result.effect_size;
    out->p_value = result.p_value;
    out->n_partitions = result.n_partitions;
    out->exhaustive = result.exhaustive ? 1 : 0;
  });
}

/* ---- debiasing ---------------------------------------------------------- */

vb_status vb_debias(const vb_embeddings* set, const vb_debias_options* options,
                    const char* const* header_lines, int n_header, vb_embeddings** out,
                    char** report_json) {
  if (!set || !options || !out) return fail_invalid("null argument");
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    vecbias::DebiasConfig cfg;
    cfg.mode = vecbias::subspace_mode_from_name(options->mode ? options->mode : "span");
    cfg.selector =
        vecbias::selector_mode_from_name(options->selector ? options->selector : "none");
    cfg.pairs = options->pairs ? options->pairs->rep : vecbias::default_gender_pairs();
    if (options->biased_pairs) cfg.biased_pairs = options->biased_pairs->rep;
    if (options->protected_words) cfg.protected_words = options->protected_words->rep;

    auto outcome = vecbias::debias_embedding(set->rep, cfg);
    std::string report;
    if (report_json) {
      report = vecbias::render_debias_report(outcome, cfg, collect_lines(header_lines, n_header));
    }
    *out = new vb_embeddings{std::move(outcome.embeddings)};
    if (report_json && emit_string(report, report_json) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
  });
}

/* ---- analogies ----------------------------------------------------------- */

vb_status vb_analogies_load(const char* path, vb_analogies** out) {
  if (!path || !out) return fail_invalid("null argument");
  return wrap([&] { *out = new vb_analogies{vecbias::load_analogies(path)}; });
}

void vb_analogies_free(vb_analogies* analogies) { delete analogies; }

int vb_analogies_size(const vb_analogies* analogies) {
  return analogies ? static_cast<int>(analogies->rep.size()) : 0;
}

/* ---- report renderers ---------------------------------------------------- */

vb_status vb_render_ripa_csv(const vb_embeddings* set, const vb_pairs* pairs,
                             const vb_wordlist* words, const char* const* header_lines,
                             int n_header, char** out) {
  if (!set || !pairs || !out) return fail_invalid("null argument");
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    const std::vector<std::string>& word_list =
        words ? words->rep : set->rep.vocab.words();
    const std::string csv = vecbias::render_ripa_csv(set->rep, pairs->rep, word_list,
                                                     collect_lines(header_lines, n_header));
    if (emit_string(csv, out) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
  });
}

vb_status vb_render_weat_json(const vb_embeddings* set, const vb_wordlist* targets1,
                              const vb_wordlist* targets2, const vb_wordlist* attrs1,
                              const vb_wordlist* attrs2, uint64_t max_exhaustive, uint64_t samples,
                              uint64_t seed, const char* const* header_lines, int n_header,
                              char** out) {
  if (!set || !targets1 || !targets2 || !attrs1 || !attrs2 || !out) {
    return fail_invalid("null argument");
  }
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    const auto input = make_weat_input(targets1, targets2, attrs1, attrs2);
    const auto result = vecbias::weat_run(input, set->rep, max_exhaustive, samples, seed);
    const std::string json =
        vecbias::render_weat_json(result, collect_lines(header_lines, n_header));
    if (emit_string(json, out) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
  });
}

vb_status vb_render_breakdown_csv(const vb_embeddings* set, const vb_cooc* table,
                                  const vb_pairs* pairs, const char* const* category_names,
                                  const vb_wordlist* const* category_lists, int n_categories,
                                  double lambda, double alpha, int k, uint64_t seed,
                                  int bootstrap_rounds, const char* const* header_lines,
                                  int n_header, char** out) {
  if (!set || !table || !pairs || !category_names || !category_lists || !out) {
    return fail_invalid("null argument");
  }
  if (n_categories < 1) return fail_invalid("need at least one category");
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    std::vector<vecbias::CategoryList> categories;
    for (int i = 0; i < n_categories; ++i) {
      if (!category_names[i] || !category_lists[i]) {
        vecbias::raise(vecbias::ErrorCode::invalid_argument, "null category");
      }
      categories.push_back({category_names[i], category_lists[i]->rep});
    }
    const vecbias::ModelConstants consts{lambda, alpha, k};
    const auto report = vecbias::breakdown(set->rep, table->rep, pairs->rep, categories, consts,
                                           seed, bootstrap_rounds);
    const std::string csv =
        vecbias::render_breakdown_csv(report, collect_lines(header_lines, n_header));
    if (emit_string(csv, out) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
  });
}

vb_status vb_render_curves_csv(const vb_analogies* analogies, const vb_embeddings* before,
                               const vb_embeddings* after, const vb_pairs* pairs, double tol,
                               const char* const* header_lines, int n_header, char** out) {
  if (!analogies || !before || !after || !pairs || !out) return fail_invalid("null argument");
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    const vecbias::RelationVector relation =
        vecbias::relation_from_pairs(before->rep, pairs->rep);
    const auto curves = vecbias::preservation_curves(
        analogies->rep, before->rep, after->rep, relation, vecbias::default_thresholds(), tol);
    const std::string csv =
        vecbias::render_curves_csv(curves, collect_lines(header_lines, n_header));
    if (emit_string(csv, out) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
  });
}

vb_status vb_render_pair_stats_csv(const vb_cooc* table, const vb_pairs* pairs,
                                   const char* const* header_lines, int n_header, char** out) {
  if (!table || !pairs || !out) return fail_invalid("null argument");
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    const std::string csv = vecbias::render_pair_stats_csv(
        table->rep, pairs->rep, collect_lines(header_lines, n_header));
    if (emit_string(csv, out) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
  });
}

vb_status vb_verify_theorems(int instances, uint64_t seed, int tamper,
                             const char* const* header_lines, int n_header, char** out_json,
                             int* out_pass) {
  if (!out_json || !out_pass) return fail_invalid("null argument");
  if (!valid_lines(header_lines, n_header)) return fail_invalid("null header lines");
  return wrap([&] {
    vecbias::VerifyOptions opts;
    opts.instances = instances;
    opts.seed = seed;
    opts.tamper = tamper != 0;
    const auto report = vecbias::run_verification(opts);
    const std::string json =
        vecbias::render_verify_json(report, opts, collect_lines(header_lines, n_header));
    if (emit_string(json, out_json) != VB_OK) {
      vecbias::raise(vecbias::ErrorCode::invalid_argument, "out of memory");
    }
    *out_pass = report.pass ? 1 : 0;
  });
}

} /* extern "C" */
