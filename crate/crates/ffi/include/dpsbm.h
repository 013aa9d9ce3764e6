#ifndef DPSBM_H
#define DPSBM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes of the C interface.
 */
typedef enum DpsbmStatus {
  DPSBM_STATUS_OK = 0,
  DPSBM_STATUS_NULL_POINTER = 1,
  DPSBM_STATUS_INVALID_ARGUMENT = 2,
  DPSBM_STATUS_PARSE = 3,
  DPSBM_STATUS_SHAPE_MISMATCH = 4,
  DPSBM_STATUS_NUMERICAL = 5,
  DPSBM_STATUS_INFEASIBLE = 6,
  DPSBM_STATUS_BUDGET_EXCEEDED = 7,
  DPSBM_STATUS_IO = 8,
  DPSBM_STATUS_PANIC = 9,
} DpsbmStatus;

/**
 * Opaque graph handle.
 */
typedef struct DpsbmGraph DpsbmGraph;

/**
 * Opaque partition handle.
 */
typedef struct DpsbmPartition DpsbmPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *dpsbm_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *dpsbm_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void dpsbm_string_free(char *s);

/**
 * Samples a graph and its planted partition. `out_truth` may be null.
 *
 * # Safety
 * `params_json` must be a NUL-terminated string; out-pointers must be valid
 * for writes.
 */
enum DpsbmStatus dpsbm_generate(const char *params_json,
                                uint64_t seed,
                                struct DpsbmGraph **out_graph,
                                struct DpsbmPartition **out_truth);

/**
 * Parses the edge-list format (`n <count> <simple|censored>` header, then
 * `i j [label]` lines).
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_graph_from_edge_list(const char *text, struct DpsbmGraph **out);

/**
 * Serializes a graph; free the result with [`dpsbm_string_free`].
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_graph_to_edge_list(const struct DpsbmGraph *g, char **out);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dpsbm_graph_n(const struct DpsbmGraph *g);

/**
 * Reads entry `(i, j)`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_graph_get(const struct DpsbmGraph *g, size_t i, size_t j, int8_t *out);

/**
 * Copy of `g` with entry `{i, j}` set to `v`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_graph_set_entry(const struct DpsbmGraph *g,
                                       size_t i,
                                       size_t j,
                                       int8_t v,
                                       struct DpsbmGraph **out);

/**
 * Releases a graph handle. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not have been freed already.
 */
void dpsbm_graph_free(struct DpsbmGraph *g);

/**
 * Parses a partition from JSON, e.g. `{"kind": "binary", "sigma": [1, -1]}`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_partition_from_json(const char *json, struct DpsbmPartition **out);

/**
 * JSON form of a partition; free the result with [`dpsbm_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_partition_to_json(const struct DpsbmPartition *p, char **out);

/**
 * Writes canonical labels (equal for partitions that agree up to relabeling
 * and sign) into `labels[0..len]`; `len` must equal the vertex count.
 *
 * # Safety
 * `p` must be a live handle; `labels` must be valid for `len` writes.
 */
enum DpsbmStatus dpsbm_partition_labels(const struct DpsbmPartition *p,
                                        uint32_t *labels,
                                        size_t len);

/**
 * Whether two partitions agree up to relabeling and sign.
 *
 * # Safety
 * Both handles must be live; `out` must be valid for writes.
 */
enum DpsbmStatus dpsbm_partition_equal(const struct DpsbmPartition *p,
                                       const struct DpsbmPartition *q,
                                       bool *out);

/**
 * Releases a partition handle. Null is ignored.
 *
 * # Safety
 * `p` must come from this library and not have been freed already.
 */
void dpsbm_partition_free(struct DpsbmPartition *p);

/**
 * Non-private estimate: solve the relaxation and round it.
 *
 * # Safety
 * `g` must be a live handle, `params_json` NUL-terminated and `out` valid
 * for writes.
 */
enum DpsbmStatus dpsbm_recover(const struct DpsbmGraph *g,
                               const char *params_json,
                               struct DpsbmPartition **out);

/**
 * Fast stability mechanism with known parameters and Laplace noise seeded
 * by `seed`. On release `*out` receives a partition, otherwise null.
 * `out_trace_json`, if not null, receives the mechanism trace as JSON.
 *
 * # Safety
 * `g` must be a live handle, `params_json` NUL-terminated; out-pointers
 * must be valid for writes.
 */
enum DpsbmStatus dpsbm_private_recover(const struct DpsbmGraph *g,
                                       const char *params_json,
                                       double eps,
                                       double delta,
                                       double c_delta,
                                       uint64_t seed,
                                       struct DpsbmPartition **out,
                                       char **out_trace_json);

/**
 * Concentration check of `g` around `p` under the default constants at
 * (`eps`, `c_delta`).
 *
 * # Safety
 * Handles must be live, `params_json` NUL-terminated, `out` valid for writes.
 */
enum DpsbmStatus dpsbm_check_concentration(const struct DpsbmGraph *g,
                                           const struct DpsbmPartition *p,
                                           const char *params_json,
                                           double eps,
                                           double c_delta,
                                           bool *out);

/**
 * Builds and verifies the dual certificate of `p`. `tau_tilde` is used by
 * the general model only; pass NaN elsewhere.
 *
 * # Safety
 * Handles must be live, `params_json` NUL-terminated, `out` valid for writes.
 */
enum DpsbmStatus dpsbm_certify(const struct DpsbmGraph *g,
                               const struct DpsbmPartition *p,
                               const char *params_json,
                               double tau_tilde,
                               bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPSBM_H */
