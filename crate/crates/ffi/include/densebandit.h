#ifndef DENSEBANDIT_H
#define DENSEBANDIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum DbStatus {
  DB_STATUS_OK = 0,
  DB_STATUS_NULL_POINTER = 1,
  DB_STATUS_INVALID_ARGUMENT = 2,
  DB_STATUS_IO = 3,
  DB_STATUS_PARSE = 4,
  DB_STATUS_WEIGHT_MISMATCH = 5,
  DB_STATUS_BUDGET_TOO_SMALL = 6,
  DB_STATUS_BUDGET_EXCEEDED = 7,
  DB_STATUS_BUFFER_TOO_SMALL = 8,
  DB_STATUS_INTERNAL = 9,
} DbStatus;

/**
 * Opaque graph handle.
 */
typedef struct DbGraph DbGraph;

/**
 * Opaque weight-vector handle.
 */
typedef struct DbWeights DbWeights;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *db_last_error(void);

/**
 * Loads a whitespace-separated edge list.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DbStatus db_graph_load(const char *path, struct DbGraph **out);

/**
 * Builds a graph on `n` vertices from `m` edges `(us[i], vs[i])`.
 *
 * # Safety
 * `us` and `vs` must point to `m` readable values and `out` must be valid.
 */
enum DbStatus db_graph_new(size_t n,
                           const size_t *us,
                           const size_t *vs,
                           size_t m,
                           struct DbGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be used afterwards.
 */
void db_graph_free(struct DbGraph *graph);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t db_graph_vertex_count(const struct DbGraph *graph);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t db_graph_edge_count(const struct DbGraph *graph);

/**
 * Copies `len` nonnegative weights into a new handle.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` must be valid.
 */
enum DbStatus db_weights_new(const double *values, size_t len, struct DbWeights **out);

/**
 * Knockout weights for `graph` drawn with `seed`.
 *
 * # Safety
 * `graph` must be a live handle and `out` must be valid.
 */
enum DbStatus db_weights_knockout(const struct DbGraph *graph,
                                  uint64_t seed,
                                  struct DbWeights **out);

/**
 * # Safety
 * `weights` must come from this library and not be used afterwards.
 */
void db_weights_free(struct DbWeights *weights);

/**
 * Number of weights, or 0 for a null handle.
 *
 * # Safety
 * `weights` must be null or a live handle.
 */
size_t db_weights_len(const struct DbWeights *weights);

/**
 * Copies the weights into `values[..capacity]`.
 *
 * # Safety
 * `weights` must be a live handle and `values` must have room for
 * `capacity` doubles.
 */
enum DbStatus db_weights_copy(const struct DbWeights *weights, double *values, size_t capacity);

/**
 * Exact densest subgraph. The members are written in increasing order.
 *
 * # Safety
 * Handles must be live; `members` must have room for `capacity` entries;
 * `len` and `density` must be valid.
 */
enum DbStatus db_exact_densest(const struct DbGraph *graph,
                               const struct DbWeights *weights,
                               size_t *members,
                               size_t capacity,
                               size_t *len,
                               double *density);

/**
 * Greedy peeling.
 *
 * # Safety
 * Same contract as [`db_exact_densest`].
 */
enum DbStatus db_greedy_peeling(const struct DbGraph *graph,
                                const struct DbWeights *weights,
                                size_t *members,
                                size_t capacity,
                                size_t *len,
                                double *density);

/**
 * DS-SR against a simulated oracle with per-edge Gaussian noise of scale
 * `noise_scale` (0 for none). Writes the output set and the number of
 * queries issued.
 *
 * # Safety
 * Handles must be live; `members` must have room for `capacity` entries;
 * `len` and `queries` must be valid.
 */
enum DbStatus db_run_dssr(const struct DbGraph *graph,
                          const struct DbWeights *weights,
                          double noise_scale,
                          uint64_t seed,
                          uint64_t budget,
                          size_t *members,
                          size_t capacity,
                          size_t *len,
                          uint64_t *queries);

/**
 * DS-Lin with default hyperparameters on a random arm family of `arms`
 * arms (0 for `2m`) of size at least `k`, capped at `max_iters` rounds
 * (0 for `m + 10000`). Writes the output set and the rounds played.
 *
 * # Safety
 * Same contract as [`db_run_dssr`], with `rounds` in place of `queries`.
 */
enum DbStatus db_run_dslin(const struct DbGraph *graph,
                           const struct DbWeights *weights,
                           double noise_scale,
                           uint64_t seed,
                           size_t k,
                           size_t arms,
                           uint64_t max_iters,
                           size_t *members,
                           size_t capacity,
                           size_t *len,
                           uint64_t *rounds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DENSEBANDIT_H */
