#ifndef DELAYCAS_H
#define DELAYCAS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum DdeaStatus {
  DDEA_STATUS_OK = 0,
  DDEA_STATUS_NULL_POINTER = 1,
  DDEA_STATUS_INVALID_UTF8 = 2,
  DDEA_STATUS_PARSE = 3,
  DDEA_STATUS_SCHEMA = 4,
  DDEA_STATUS_HYPOTHESIS = 5,
  DDEA_STATUS_NUMERIC = 6,
  DDEA_STATUS_IO = 7,
  DDEA_STATUS_OUT_OF_RANGE = 8,
  DDEA_STATUS_PANIC = 9,
} DdeaStatus;

/**
 * Parsed and validated corpus.
 */
typedef struct DdeaCorpus DdeaCorpus;

/**
 * One delay differential equation.
 */
typedef struct DdeaEquation DdeaEquation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Owned by the library;
 * valid until the next call on the same thread.
 */
const char *ddea_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ddea_string_free(char *s);

/**
 * Parses a JSON corpus.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DdeaStatus ddea_corpus_parse(const char *json, struct DdeaCorpus **out);

/**
 * Loads the built-in demo corpus.
 *
 * # Safety
 * `out` must be writable.
 */
enum DdeaStatus ddea_corpus_demo(struct DdeaCorpus **out);

/**
 * Number of entries in a corpus; 0 for null.
 *
 * # Safety
 * `corpus` must be null or a live handle.
 */
size_t ddea_corpus_len(const struct DdeaCorpus *corpus);

/**
 * # Safety
 * `corpus` must be null or a live handle; it is invalid afterwards.
 */
void ddea_corpus_free(struct DdeaCorpus *corpus);

/**
 * Runs `command` (`classify`, `cascade`, `verify`, `nev` or `limit`) over the corpus,
 * writing the JSON report to `out_json` and whether every check passed to `out_pass`.
 * `truncation` 0 selects the default.
 *
 * # Safety
 * Pointers must be valid; `out_pass` may be null.
 */
enum DdeaStatus ddea_run_json(const struct DdeaCorpus *corpus,
                              const char *command,
                              uint64_t seed,
                              size_t truncation,
                              char **out_json,
                              bool *out_pass);

/**
 * Copies equation `index` out of a corpus.
 *
 * # Safety
 * `corpus` must be a live handle; `out` must be writable.
 */
enum DdeaStatus ddea_equation_from_corpus(const struct DdeaCorpus *corpus,
                                          size_t index,
                                          struct DdeaEquation **out);

/**
 * Builds `w(z+1) - w(z-1) = (a w' + b w + c)/w^2` from expressions in `z`.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be writable.
 */
enum DdeaStatus ddea_equation_inverse_square(const char *a,
                                             const char *b,
                                             const char *c,
                                             struct DdeaEquation **out);

/**
 * Builds `w(z+1) - w(z-1) + a w'/w = b`.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be writable.
 */
enum DdeaStatus ddea_equation_pure_log_deriv(const char *a,
                                             const char *b,
                                             struct DdeaEquation **out);

/**
 * Classifier verdict as JSON.
 *
 * # Safety
 * `eq` must be a live handle; `out_json` must be writable.
 */
enum DdeaStatus ddea_equation_classify_json(const struct DdeaEquation *eq, char **out_json);

/**
 * # Safety
 * `eq` must be null or a live handle; it is invalid afterwards.
 */
void ddea_equation_free(struct DdeaEquation *eq);

/**
 * Cascade from a zero of order `p`, `steps` lattice steps, as JSON with the
 * confinement verdict when one can be given. `truncation` 0 selects the default.
 *
 * # Safety
 * `eq` must be a live handle; `out_json` must be writable.
 */
enum DdeaStatus ddea_cascade_json(const struct DdeaEquation *eq,
                                  uint32_t p,
                                  size_t steps,
                                  size_t truncation,
                                  bool backward,
                                  char **out_json);

/**
 * Exact continuum limit of the inverse-square delay Painlevé equation, as JSON.
 *
 * # Safety
 * `out_json` must be writable.
 */
enum DdeaStatus ddea_continuum_limit(uint32_t truncation, char **out_json);

/**
 * Weierstrass `wp(z)` and `wp'(z)` for invariants `g2`, `g3`. `out` receives
 * `[re wp, im wp, re wp', im wp']`.
 *
 * # Safety
 * `out` must point to 4 writable doubles.
 */
enum DdeaStatus ddea_wp_eval(double g2_re,
                             double g2_im,
                             double g3_re,
                             double g3_im,
                             double z_re,
                             double z_im,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELAYCAS_H */
