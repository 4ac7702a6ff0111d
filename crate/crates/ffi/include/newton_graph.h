#ifndef NEWTON_GRAPH_H
#define NEWTON_GRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NgStatus {
  NG_STATUS_OK = 0,
  /**
   * Bad input data or arguments.
   */
  NG_STATUS_INPUT = 1,
  /**
   * A negative mathematical verdict, such as a map that is not
   * postcritically fixed.
   */
  NG_STATUS_VERDICT = 2,
  /**
   * A numerical failure.
   */
  NG_STATUS_NUMERICAL = 3,
  NG_STATUS_NULL_POINTER = 4,
  NG_STATUS_PANIC = 5,
} NgStatus;

/**
 * A Newton map.
 */
typedef struct NgMap NgMap;

/**
 * Pullback levels up to the Newton graph.
 */
typedef struct NgNewtonGraph NgNewtonGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *ng_last_error(void);

/**
 * Static version string.
 */
const char *ng_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void ng_string_free(char *s);

/**
 * Newton map of the polynomial with the given roots. `mult` may be null
 * for simple roots.
 *
 * # Safety
 * `re`, `im` (and `mult` when not null) must point to `n` values; `out`
 * must be writable.
 */
enum NgStatus ng_map_from_roots(const double *re,
                                const double *im,
                                const uint32_t *mult,
                                size_t n,
                                struct NgMap **out_map);

/**
 * Newton map of the polynomial with coefficients in ascending degree.
 *
 * # Safety
 * `re` and `im` must point to `n` values; `out` must be writable.
 */
enum NgStatus ng_map_from_coeffs(const double *re,
                                 const double *im,
                                 size_t n,
                                 struct NgMap **out_map);

/**
 * Overrides the fixed-point tolerance used by later calls on `map`.
 *
 * # Safety
 * `map` must be a live handle.
 */
enum NgStatus ng_map_set_tol_fix(struct NgMap *map, double tol_fix);

/**
 * # Safety
 * `map` must be null or a handle not yet freed.
 */
void ng_map_free(struct NgMap *map);

/**
 * # Safety
 * `map` must be a live handle and `degree` writable.
 */
enum NgStatus ng_map_degree(const struct NgMap *map, size_t *degree);

/**
 * Evaluates the map; `is_infinite` is set when the value is infinity.
 *
 * # Safety
 * `map` must be a live handle and the outputs writable.
 */
enum NgStatus ng_map_eval(const struct NgMap *map,
                          double re,
                          double im,
                          double *out_re,
                          double *out_im,
                          bool *is_infinite);

/**
 * Analysis report as canonical JSON.
 *
 * # Safety
 * `map` must be a live handle and `json` writable.
 */
enum NgStatus ng_map_analyze(const struct NgMap *map, char **json);

/**
 * # Safety
 * `map` must be a live handle and `out_graph` writable.
 */
enum NgStatus ng_newton_graph_compute(const struct NgMap *map,
                                      size_t max_level,
                                      struct NgNewtonGraph **out_graph);

/**
 * # Safety
 * `graph` must be null or a handle not yet freed.
 */
void ng_newton_graph_free(struct NgNewtonGraph *graph);

/**
 * The level `N` and whether `(ΔN, f)` passed validation.
 *
 * # Safety
 * `graph` must be a live handle and the outputs writable.
 */
enum NgStatus ng_newton_graph_level(const struct NgNewtonGraph *graph, size_t *level, bool *valid);

/**
 * Vertex and edge counts of level `n`.
 *
 * # Safety
 * `graph` must be a live handle and the outputs writable.
 */
enum NgStatus ng_newton_graph_counts(const struct NgNewtonGraph *graph,
                                     size_t n,
                                     size_t *vertices,
                                     size_t *edges);

/**
 * Level `n` with its self-map in the graph JSON schema.
 *
 * # Safety
 * `graph` must be a live handle and `json` writable.
 */
enum NgStatus ng_newton_graph_json(const struct NgNewtonGraph *graph, size_t n, char **json);

/**
 * The validation report of the final level.
 *
 * # Safety
 * `graph` must be a live handle and `json` writable.
 */
enum NgStatus ng_newton_graph_report(const struct NgNewtonGraph *graph, char **json);

/**
 * Spectral radius of the nonnegative `n` by `n` row-major matrix.
 *
 * # Safety
 * `entries` must point to `n * n` values and `value` be writable.
 */
enum NgStatus ng_leading_eigenvalue(const double *entries, size_t n, double *value);

/**
 * # Safety
 * `entries` must point to `n * n` values and `irreducible` be writable.
 */
enum NgStatus ng_is_irreducible(const double *entries, size_t n, bool *irreducible);

/**
 * Copies the last error into a caller buffer, truncating; returns the
 * full length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t ng_last_error_copy(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEWTON_GRAPH_H */
