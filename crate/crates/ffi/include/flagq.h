#ifndef FLAGQ_H
#define FLAGQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum FlagqStatus {
  FlagqStatus_Ok = 0,
  FlagqStatus_NullArgument = 1,
  FlagqStatus_Io = 2,
  FlagqStatus_Parse = 3,
  FlagqStatus_GuardExceeded = 4,
  FlagqStatus_Infeasible = 5,
  FlagqStatus_InvalidArgument = 6,
  FlagqStatus_Panic = 7,
} FlagqStatus;

/**
 * An immutable directed flag complex handle.
 */
typedef struct FlagqComplex FlagqComplex;

/**
 * A built (q,i,j)-connectivity digraph handle.
 */
typedef struct FlagqConnectivity FlagqConnectivity;

/**
 * An immutable digraph handle.
 */
typedef struct FlagqDigraph FlagqDigraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the message of the most recent failure on this thread, or NULL.
 * The caller owns the string and must free it with `flagq_string_free`.
 */
char *flagq_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by a flagq function and not
 * yet freed, or NULL.
 */
void flagq_string_free(char *s);

/**
 * Loads a digraph from an edge-list file (one "src dst" per line, `#`
 * comments).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum FlagqStatus flagq_digraph_from_edge_list_path(const char *path, struct FlagqDigraph **out);

/**
 * Builds a digraph from parallel edge arrays. Self-loops and out-of-range
 * endpoints are rejected.
 *
 * # Safety
 * `sources` and `targets` must point to `num_edges` readable elements;
 * `out` must be valid.
 */
enum FlagqStatus flagq_digraph_from_edges(uint32_t num_vertices,
                                          const uint32_t *sources,
                                          const uint32_t *targets,
                                          uintptr_t num_edges,
                                          struct FlagqDigraph **out);

/**
 * # Safety
 * `g` must be a live digraph handle or NULL.
 */
void flagq_digraph_free(struct FlagqDigraph *g);

/**
 * # Safety
 * `g` must be a live digraph handle.
 */
uint64_t flagq_digraph_num_vertices(const struct FlagqDigraph *g);

/**
 * # Safety
 * `g` must be a live digraph handle.
 */
uint64_t flagq_digraph_num_edges(const struct FlagqDigraph *g);

/**
 * Enumerates the directed flag complex. `max_dim < 0` means unbounded;
 * `ceiling` caps the per-dimension simplex count.
 *
 * # Safety
 * `g` must be a live digraph handle; `out` must be valid.
 */
enum FlagqStatus flagq_complex_build(const struct FlagqDigraph *g,
                                     int32_t max_dim,
                                     uint64_t ceiling,
                                     struct FlagqComplex **out);

/**
 * # Safety
 * `c` must be a live complex handle or NULL.
 */
void flagq_complex_free(struct FlagqComplex *c);

/**
 * Dimension of the complex; -1 when empty.
 *
 * # Safety
 * `c` must be a live complex handle.
 */
int64_t flagq_complex_dim(const struct FlagqComplex *c);

/**
 * Copies per-dimension simplex counts into `buf` (up to `cap` entries)
 * and stores the true length in `written`.
 *
 * # Safety
 * `buf` must point to `cap` writable elements; `written` must be valid.
 */
enum FlagqStatus flagq_complex_counts(const struct FlagqComplex *c,
                                      uint64_t *buf,
                                      uintptr_t cap,
                                      uintptr_t *written);

/**
 * Classical structure vectors (Q, N, T, Qhat) as a JSON object.
 *
 * # Safety
 * `c` must be a live complex handle; `out` must be valid.
 */
enum FlagqStatus flagq_structure_vectors_json(const struct FlagqComplex *c, char **out);

/**
 * Builds the (q,i,j)-connectivity digraph.
 *
 * # Safety
 * `c` must be a live complex handle; `out` must be valid.
 */
enum FlagqStatus flagq_connectivity_build(const struct FlagqComplex *c,
                                          uint32_t q,
                                          uint32_t i,
                                          uint32_t j,
                                          struct FlagqConnectivity **out);

/**
 * # Safety
 * `g` must be a live connectivity handle or NULL.
 */
void flagq_connectivity_free(struct FlagqConnectivity *g);

/**
 * # Safety
 * `g` must be a live connectivity handle.
 */
uint64_t flagq_connectivity_num_nodes(const struct FlagqConnectivity *g);

/**
 * # Safety
 * `g` must be a live connectivity handle.
 */
uint64_t flagq_connectivity_num_edges(const struct FlagqConnectivity *g);

/**
 * Summary of the digraph and its condensation as JSON:
 * `{q,i,j,nodes,edges,scc_count,condensation_edges}`.
 *
 * # Safety
 * `g` must be a live connectivity handle; `out` must be valid.
 */
enum FlagqStatus flagq_connectivity_summary_json(const struct FlagqConnectivity *g, char **out);

/**
 * Longest simplicial path under (q,i,j). On success writes the number of
 * simplices to `length`, the path fraction to `fraction`, and, when
 * `json_report` is non-NULL, the full path report as JSON.
 *
 * # Safety
 * `c` must be a live complex handle; `length` and `fraction` must be
 * valid pointers.
 */
enum FlagqStatus flagq_longest_simplicial_path(const struct FlagqComplex *c,
                                               uint32_t q,
                                               uint32_t i,
                                               uint32_t j,
                                               uint32_t retries,
                                               uint64_t *length,
                                               double *fraction,
                                               char **json_report);

/**
 * Betti numbers and height of the condensed (q,i,j)-poset as JSON:
 * `{q,i,j,betti,height}`.
 *
 * # Safety
 * `c` must be a live complex handle; `out` must be valid.
 */
enum FlagqStatus flagq_condensed_topology_json(const struct FlagqComplex *c,
                                               uint32_t q,
                                               uint32_t i,
                                               uint32_t j,
                                               uint64_t chain_ceiling,
                                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLAGQ_H */
