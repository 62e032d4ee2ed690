#ifndef PRAR_H
#define PRAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum PrarStatus {
  PRAR_STATUS_OK = 0,
  PRAR_STATUS_NULL_POINTER = 1,
  PRAR_STATUS_INVALID_ARGUMENT = 2,
  PRAR_STATUS_INVALID_GRAPH = 3,
  PRAR_STATUS_DISCONNECTED = 4,
  PRAR_STATUS_BUDGET_EXCEEDED = 5,
  PRAR_STATUS_BUFFER_TOO_SMALL = 6,
  PRAR_STATUS_PARSE_ERROR = 7,
  PRAR_STATUS_IO_ERROR = 8,
  PRAR_STATUS_WRONG_MODEL_KIND = 9,
  PRAR_STATUS_PANIC = 10,
} PrarStatus;

/**
 * An undirected simple graph.
 */
typedef struct PrarGraph PrarGraph;

/**
 * A model bound to a graph, with its own random stream.
 */
typedef struct PrarSampler PrarSampler;

/**
 * Counters for the most recent sample.
 */
typedef struct PrarStats {
  uint64_t attempts;
  uint64_t rejections;
  uint64_t proposals;
  uint64_t recursion_depth_max;
  uint64_t bernoulli_draws;
  uint64_t uniform_draws;
  uint64_t normal_draws;
} PrarStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *prar_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *prar_version(void);

/**
 * Build a graph on `n` nodes from `m` pairs stored flat in `pairs`
 * (`2·m` entries).
 *
 * # Safety
 * `pairs` must point to `2·m` readable values (or be NULL when `m` is 0);
 * `out` must be writable.
 */
enum PrarStatus prar_graph_new(size_t n, const size_t *pairs, size_t m, struct PrarGraph **out);

/**
 * Build a named graph: `grid:RxC`, `cycle:N`, `path:N` or `complete:N`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum PrarStatus prar_graph_generate(const char *spec, struct PrarGraph **out);

/**
 * Read an edge-list file: a `n m` header, then `m` lines `i j`; `#`
 * starts a comment line.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PrarStatus prar_graph_read(const char *path, struct PrarGraph **out);

/**
 * # Safety
 * `g` must come from a `prar_graph_*` constructor and not be freed twice.
 */
void prar_graph_free(struct PrarGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (which gives 0).
 */
size_t prar_graph_node_count(const struct PrarGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (which gives 0).
 */
size_t prar_graph_edge_count(const struct PrarGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (which gives 0).
 */
size_t prar_graph_max_degree(const struct PrarGraph *g);

/**
 * Endpoints of edge `id` (edges are numbered in sorted `(i, j)`, `i < j`,
 * order).
 *
 * # Safety
 * `g` must be a live graph handle; `i` and `j` must be writable.
 */
enum PrarStatus prar_graph_edge(const struct PrarGraph *g, size_t id, size_t *i, size_t *j);

/**
 * Connected components using only edges whose byte in `bits` is nonzero.
 *
 * # Safety
 * `g` must be a live graph handle; `bits` must hold `len` bytes; `out`
 * must be writable.
 */
enum PrarStatus prar_graph_count_components(const struct PrarGraph *g,
                                            const uint8_t *bits,
                                            size_t len,
                                            size_t *out);

/**
 * Bind a model (for example `hardcore:lambda=1` or `rc:p=0.25,q=2`) to a
 * copy of `g`. `method` is `prar`, `backbone`, `ar`, or NULL for `prar`.
 * `budget` caps primitive draws per sample; 0 selects the default.
 *
 * # Safety
 * `g` must be a live graph handle; strings must be NUL-terminated; `out`
 * must be writable.
 */
enum PrarStatus prar_sampler_new(const struct PrarGraph *g,
                                 const char *model,
                                 const char *method,
                                 uint64_t seed,
                                 uint64_t budget,
                                 struct PrarSampler **out);

/**
 * # Safety
 * `s` must come from [`prar_sampler_new`] and not be freed twice.
 */
void prar_sampler_free(struct PrarSampler *s);

/**
 * Number of nodes or edges the model labels; 0 for NULL.
 *
 * # Safety
 * `s` must be a live sampler handle or NULL.
 */
size_t prar_sampler_dimension_count(const struct PrarSampler *s);

/**
 * Draw one sample of a binary model. Labels of `target` (or of every
 * dimension when `target_len` is 0) are written to `out` in the order
 * given, as 0 or 1.
 *
 * # Safety
 * `s` must be a live sampler handle; `target` must hold `target_len`
 * values; `out` must hold `out_len` bytes.
 */
enum PrarStatus prar_sampler_sample_bits(struct PrarSampler *s,
                                         const size_t *target,
                                         size_t target_len,
                                         uint8_t *out,
                                         size_t out_len);

/**
 * Like [`prar_sampler_sample_bits`] for the autonormal model.
 *
 * # Safety
 * As for [`prar_sampler_sample_bits`], with `out` holding `out_len`
 * doubles.
 */
enum PrarStatus prar_sampler_sample_reals(struct PrarSampler *s,
                                          const size_t *target,
                                          size_t target_len,
                                          double *out,
                                          size_t out_len);

/**
 * Draw a spanning tree (model `wilson:root=R`). `parent[v]` receives the
 * parent of node `v`, and -1 for the root.
 *
 * # Safety
 * `s` must be a live sampler handle; `parent` must hold `len` values.
 */
enum PrarStatus prar_sampler_sample_tree(struct PrarSampler *s, int64_t *parent, size_t len);

/**
 * Counters of the most recent successful sample.
 *
 * # Safety
 * `s` must be a live sampler handle; `out` must be writable.
 */
enum PrarStatus prar_sampler_last_stats(const struct PrarSampler *s, struct PrarStats *out);

/**
 * The hard-core drift `γ(λ, Δ)`; NaN for negative or non-finite `λ`.
 */
double prar_gamma_hardcore(double lambda, size_t delta);

/**
 * The hard-core critical activity for maximum degree `delta >= 2`
 * (infinite for 2).
 *
 * # Safety
 * `out` must be writable.
 */
enum PrarStatus prar_critical_lambda_hardcore(size_t delta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRAR_H */
