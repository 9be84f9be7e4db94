/* C interface to the vecbias library.

   All handles are opaque; create and destroy them with the matching
   vb_*_load / vb_*_free calls. Functions returning vb_status report failure
   through the code and leave a message in vb_last_error() (thread-local).
   Strings returned through char** out-parameters are heap buffers owned by
   the caller; release them with vb_string_free(). */

#ifndef VECBIAS_VECBIAS_H
#define VECBIAS_VECBIAS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define VB_EXPORT __declspec(dllexport)
#else
#define VB_EXPORT __attribute__((visibility("default")))
#endif

typedef enum vb_status {
  VB_OK = 0,
  VB_ERR_IO = 1,
  VB_ERR_PARSE = 2,
  VB_ERR_INVALID_ARGUMENT = 3,
  VB_ERR_NOT_FOUND = 4,
  VB_ERR_UNOBSERVED_PAIR = 5,
  VB_ERR_NUMERIC = 6,
  VB_ERR_INTERNAL = 7
} vb_status;

VB_EXPORT const char* vb_status_name(vb_status status);

/* Message of the last failing call on this thread; empty string otherwise. */
VB_EXPORT const char* vb_last_error(void);

VB_EXPORT void vb_string_free(char* s);
VB_EXPORT const char* vb_version(void);

typedef struct vb_embeddings vb_embeddings;
typedef struct vb_pairs vb_pairs;
typedef struct vb_wordlist vb_wordlist;
typedef struct vb_cooc vb_cooc;
typedef struct vb_analogies vb_analogies;

/* ---- embeddings ------------------------------------------------------- */

/* format is "word2vec-text" or "glove-text". */
VB_EXPORT vb_status vb_embeddings_load(const char* path, const char* format, vb_embeddings** out);
VB_EXPORT vb_status vb_embeddings_create(const char* const* words, int n_words, int dim,
                                         const double* row_major_data, vb_embeddings** out);
VB_EXPORT vb_status vb_embeddings_save(const vb_embeddings* set, const char* path,
                                       const char* format);
VB_EXPORT void vb_embeddings_free(vb_embeddings* set);
VB_EXPORT int vb_embeddings_size(const vb_embeddings* set);
VB_EXPORT int vb_embeddings_dim(const vb_embeddings* set);
/* NULL when index is out of range. */
VB_EXPORT const char* vb_embeddings_word(const vb_embeddings* set, int index);
/* Copies the token's vector into out_vector (vb_embeddings_dim doubles). */
VB_EXPORT vb_status vb_embeddings_vector(const vb_embeddings* set, const char* token,
                                         double* out_vector);

/* ---- word pairs and word lists ---------------------------------------- */

VB_EXPORT vb_status vb_pairs_load(const char* path, vb_pairs** out);
VB_EXPORT vb_status vb_pairs_create(const char* const* firsts, const char* const* seconds,
                                    int n_pairs, vb_pairs** out);
/* The ten built-in gender-defining pairs, female word first. */
VB_EXPORT vb_status vb_pairs_default_gender(vb_pairs** out);
VB_EXPORT void vb_pairs_free(vb_pairs* pairs);
VB_EXPORT int vb_pairs_size(const vb_pairs* pairs);
VB_EXPORT const char* vb_pairs_first(const vb_pairs* pairs, int index);
VB_EXPORT const char* vb_pairs_second(const vb_pairs* pairs, int index);

VB_EXPORT vb_status vb_wordlist_load(const char* path, vb_wordlist** out);
VB_EXPORT vb_status vb_wordlist_create(const char* const* words, int n_words, vb_wordlist** out);
VB_EXPORT void vb_wordlist_free(vb_wordlist* list);
VB_EXPORT int vb_wordlist_size(const vb_wordlist* list);
VB_EXPORT const char* vb_wordlist_word(const vb_wordlist* list, int index);

/* ---- co-occurrence statistics ------------------------------------------ */

VB_EXPORT vb_status vb_cooc_count_file(const char* path, int window, int lowercase, int shards,
                                       vb_cooc** out);
VB_EXPORT vb_status vb_cooc_load(const char* path, vb_cooc** out);
VB_EXPORT vb_status vb_cooc_save(const vb_cooc* table, const char* path);
VB_EXPORT void vb_cooc_free(vb_cooc* table);
VB_EXPORT int vb_cooc_window(const vb_cooc* table);
VB_EXPORT uint64_t vb_cooc_total_events(const vb_cooc* table);
VB_EXPORT uint64_t vb_cooc_count(const vb_cooc* table, const char* center, const char* context);
VB_EXPORT vb_status vb_cooc_pmi(const vb_cooc* table, const char* x, const char* w, double* out);
VB_EXPORT vb_status vb_cooc_cspmi(const vb_cooc* table, const char* x, const char* y, double* out);
VB_EXPORT vb_status vb_cooc_log_conditional_ratio(const vb_cooc* table, const char* w,
                                                  const char* x, const char* y, double* out);

/* ---- association scores ------------------------------------------------ */

/* Scalar projection of the word onto the pairs' principal relation vector. */
VB_EXPORT vb_status vb_ripa(const vb_embeddings* set, const vb_pairs* pairs, const char* word,
                            double* out);
VB_EXPORT vb_status vb_pair_association(const vb_embeddings* set, const char* word, const char* x,
                                        const char* y, double* out);
VB_EXPORT vb_status vb_genderedness(const vb_embeddings* set, const char* word,
                                    const vb_pairs* pairs, double* out);
VB_EXPORT vb_status vb_ripa_expected_sgns(const vb_cooc* table, double lambda, double alpha, int k,
                                          const char* w, const char* x, const char* y,
                                          double* out);

typedef struct vb_weat_result {
  double statistic;
  double effect_size;
  double p_value;
  uint64_t n_partitions;
  int exhaustive;
} vb_weat_result;

VB_EXPORT vb_status vb_weat(const vb_embeddings* set, const vb_wordlist* targets1,
                            const vb_wordlist* targets2, const vb_wordlist* attrs1,
                            const vb_wordlist* attrs2, uint64_t max_exhaustive, uint64_t samples,
                            uint64_t seed, vb_weat_result* out);

/* ---- debiasing ---------------------------------------------------------- */

typedef struct vb_debias_options {
  const char* mode;                    /* "span" (default) or "pc1" */
  const char* selector;                /* "none" (default), "list", "unsupervised" */
  const vb_pairs* pairs;               /* NULL = built-in gender pairs */
  const vb_pairs* biased_pairs;        /* required for selector "unsupervised" */
  const vb_wordlist* protected_words;  /* optional */
} vb_debias_options;

/* Writes the debiased embeddings to *out. When report_json is non-NULL it
   receives a JSON report (protected words, subspace rank, worst residual). */
VB_EXPORT vb_status vb_debias(const vb_embeddings* set, const vb_debias_options* options,
                              const char* const* header_lines, int n_header, vb_embeddings** out,
                              char** report_json);

/* ---- analogies ----------------------------------------------------------- */

VB_EXPORT vb_status vb_analogies_load(const char* path, vb_analogies** out);
VB_EXPORT void vb_analogies_free(vb_analogies* analogies);
VB_EXPORT int vb_analogies_size(const vb_analogies* analogies);

/* ---- report renderers ---------------------------------------------------- */
/* header_lines (may be NULL when n_header is 0) are echoed into the report
   as its provenance header. *out receives the full file contents. */

VB_EXPORT vb_status vb_render_ripa_csv(const vb_embeddings* set, const vb_pairs* pairs,
                                       const vb_wordlist* words, /* NULL = whole vocabulary */
                                       const char* const* header_lines, int n_header, char** out);

VB_EXPORT vb_status vb_render_weat_json(const vb_embeddings* set, const vb_wordlist* targets1,
                                        const vb_wordlist* targets2, const vb_wordlist* attrs1,
                                        const vb_wordlist* attrs2, uint64_t max_exhaustive,
                                        uint64_t samples, uint64_t seed,
                                        const char* const* header_lines, int n_header, char** out);

VB_EXPORT vb_status vb_render_breakdown_csv(const vb_embeddings* set, const vb_cooc* table,
                                            const vb_pairs* pairs,
                                            const char* const* category_names,
                                            const vb_wordlist* const* category_lists,
                                            int n_categories, double lambda, double alpha, int k,
                                            uint64_t seed, int bootstrap_rounds,
                                            const char* const* header_lines, int n_header,
                                            char** out);

VB_EXPORT vb_status vb_render_curves_csv(const vb_analogies* analogies,
                                         const vb_embeddings* before, const vb_embeddings* after,
                                         const vb_pairs* pairs, double tol,
                                         const char* const* header_lines, int n_header,
                                         char** out);

VB_EXPORT vb_status vb_render_pair_stats_csv(const vb_cooc* table, const vb_pairs* pairs,
                                             const char* const* header_lines, int n_header,
                                             char** out);

/* Synthetic-factorization checks; *out_pass is 1 iff every check passed.
   tamper != 0 deliberately corrupts the projection as a negative control. */
VB_EXPORT vb_status vb_verify_theorems(int instances, uint64_t seed, int tamper,
                                       const char* const* header_lines, int n_header,
                                       char** out_json, int* out_pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VECBIAS_VECBIAS_H */
