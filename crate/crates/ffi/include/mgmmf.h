#ifndef MGMMF_H
#define MGMMF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MgmmfStatus {
  MGMMF_STATUS_OK = 0,
  MGMMF_STATUS_NULL_POINTER = 1,
  MGMMF_STATUS_INVALID_UTF8 = 2,
  // Malformed graph, bad parameter or infeasible request.
  MGMMF_STATUS_INVALID_INPUT = 3,
  // Template and background do not fit together.
  MGMMF_STATUS_SHAPE_MISMATCH = 4,
  MGMMF_STATUS_IO = 5,
  // Numerical failure inside the solver.
  MGMMF_STATUS_RUNTIME = 6,
  MGMMF_STATUS_PANIC = 7,
  MGMMF_STATUS_INDEX_OUT_OF_RANGE = 8,
} MgmmfStatus;

typedef enum MgmmfPadding {
  MGMMF_PADDING_NAIVE = 0,
  MGMMF_PADDING_CENTERED = 1,
  MGMMF_PADDING_GENERALIZED = 2,
} MgmmfPadding;

typedef struct MgmmfGraph MgmmfGraph;

typedef struct MgmmfRanking MgmmfRanking;

typedef struct MgmmfMatchOptions {
  // One of the `MgmmfPadding` values.
  uint32_t padding;
  // Template non-edge weight for generalized padding, in `[0, 1]`.
  double w;
  size_t restarts;
  uint64_t seed;
  // 0 selects the default.
  size_t max_iters;
  // Non-positive selects the default.
  double epsilon;
  // Merge restarts that found the same matching.
  bool dedup;
} MgmmfMatchOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string. The
// pointer stays valid until the next call into this library on the thread.
const char *mgmmf_last_error(void);

struct MgmmfMatchOptions mgmmf_match_options_default(void);

// Parses a graph from `.mx` text.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum MgmmfStatus mgmmf_graph_from_mx(const char *text, struct MgmmfGraph **out);

// Reads a graph from an `.mx` file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum MgmmfStatus mgmmf_graph_load(const char *path, struct MgmmfGraph **out);

// Number of labels, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live graph handle.
size_t mgmmf_graph_order(const struct MgmmfGraph *g);

// # Safety
// `g` must be null or a live graph handle.
size_t mgmmf_graph_channel_count(const struct MgmmfGraph *g);

// # Safety
// `g` must be null or a handle from this library not yet freed.
void mgmmf_graph_free(struct MgmmfGraph *g);

// Runs the matched filter. `options` may be null for the defaults.
//
// # Safety
// `template` and `background` must be live graph handles, `options` null or
// valid, `out` a valid pointer.
enum MgmmfStatus mgmmf_match(const struct MgmmfGraph *template_,
                             const struct MgmmfGraph *background,
                             const struct MgmmfMatchOptions *options,
                             struct MgmmfRanking **out);

// Number of entries, or 0 for a null handle.
//
// # Safety
// `r` must be null or a live ranking handle.
size_t mgmmf_ranking_len(const struct MgmmfRanking *r);

// Length of each matching (the template order), or 0.
//
// # Safety
// `r` must be null or a live ranking handle.
size_t mgmmf_ranking_template_order(const struct MgmmfRanking *r);

// Objective, restart id and multiplicity of entry `index` (0 is rank 1).
// Any of the output pointers may be null.
//
// # Safety
// `r` must be a live ranking handle; non-null outputs must be valid.
enum MgmmfStatus mgmmf_ranking_entry(const struct MgmmfRanking *r,
                                     size_t index,
                                     double *objective,
                                     size_t *restart_id,
                                     size_t *multiplicity);

// Copies the 1-based background labels matched to template labels
// `1..=len` of entry `index` into `labels`. `len` must equal the template
// order.
//
// # Safety
// `r` must be a live ranking handle and `labels` valid for `len` writes.
enum MgmmfStatus mgmmf_ranking_matching(const struct MgmmfRanking *r,
                                        size_t index,
                                        size_t *labels,
                                        size_t len);

// Per-channel recovered signal of entry `index`, written to `values`
// (`len` must equal the channel count).
//
// # Safety
// `r` must be a live ranking handle and `values` valid for `len` writes.
enum MgmmfStatus mgmmf_ranking_recovery(const struct MgmmfRanking *r,
                                        size_t index,
                                        double *values,
                                        size_t len);

// The ranking as JSON. Release the string with [`mgmmf_string_free`].
// Returns null for a null handle.
//
// # Safety
// `r` must be null or a live ranking handle.
char *mgmmf_ranking_to_json(const struct MgmmfRanking *r);

// # Safety
// `r` must be null or a handle from this library not yet freed.
void mgmmf_ranking_free(struct MgmmfRanking *r);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void mgmmf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MGMMF_H */
