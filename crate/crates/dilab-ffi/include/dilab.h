#ifndef DILAB_H
#define DILAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

#define DILAB_OK 0

#define DILAB_ERR_NULL_POINTER 1

#define DILAB_ERR_INVALID_UTF8 2

#define DILAB_ERR_PARSE 3

#define DILAB_ERR_DOMAIN 4

#define DILAB_ERR_NOT_FOUND 5

#define DILAB_ERR_COMPUTATION 6

#define DILAB_ERR_PANIC 7

// Opaque non-negative integer matrix read as a digraph.
typedef struct DilabDigraph DilabDigraph;

// Opaque weighted graph.
typedef struct DilabGraph DilabGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call into the library on this thread.
const char *dilab_last_error(void);

// # Safety
// `s` must be null or a string returned by this library that has not been freed.
void dilab_string_free(char *s);

// Parses `{"vertices": [{"id", "weight"}], "edges": [[a, b]]}`.
//
// # Safety
// `json` must be a nul-terminated string and `out_graph` a valid pointer.
int32_t dilab_graph_from_json(const char *json, struct DilabGraph **out_graph);

// # Safety
// `graph` must be null or a handle from [`dilab_graph_from_json`] not yet freed.
void dilab_graph_free(struct DilabGraph *graph);

// # Safety
// `graph` must be a live handle and `out_count` a valid pointer.
int32_t dilab_graph_vertex_count(const struct DilabGraph *graph, uintptr_t *out_count);

// Reciprocal of the smallest positive root of the clique polynomial.
//
// # Safety
// `graph` must be a live handle and `out_rate` a valid pointer.
int32_t dilab_graph_growth_rate(const struct DilabGraph *graph, double *out_rate);

// The clique polynomial as text. Free the result with [`dilab_string_free`].
//
// # Safety
// `graph` must be a live handle and `out_text` a valid pointer.
int32_t dilab_graph_clique_polynomial(const struct DilabGraph *graph, char **out_text);

// Parses `{"matrix": [[...]]}`, entry `(j, i)` counting arcs `i -> j`.
//
// # Safety
// `json` must be a nul-terminated string and `out_digraph` a valid pointer.
int32_t dilab_digraph_from_json(const char *json, struct DilabDigraph **out_digraph);

// # Safety
// `digraph` must be null or a handle from [`dilab_digraph_from_json`] not yet freed.
void dilab_digraph_free(struct DilabDigraph *digraph);

// # Safety
// `digraph` must be a live handle and `out_count` a valid pointer.
int32_t dilab_digraph_curve_count(const struct DilabDigraph *digraph, uintptr_t *out_count);

// # Safety
// `digraph` must be a live handle and `out_radius` a valid pointer.
int32_t dilab_digraph_spectral_radius(const struct DilabDigraph *digraph, double *out_radius);

// Writes 1 to `out_equal` when the characteristic polynomial equals the
// reciprocal of the curve-complex clique polynomial, 0 otherwise.
//
// # Safety
// `digraph` must be a live handle and `out_equal` a valid pointer.
int32_t dilab_digraph_verify_mcmullen(const struct DilabDigraph *digraph, int32_t *out_equal);

// Largest real root of the δ̲ₙ polynomial, `n >= 3`.
//
// # Safety
// `out_value` must be a valid pointer.
int32_t dilab_underline_delta(uint32_t n, double *out_value);

// `min(14.5^(1/n), δ̲ₙ)`.
//
// # Safety
// `out_value` must be a valid pointer.
int32_t dilab_lower_bound(uint32_t n, double *out_value);

// Minimizes a bundled case and returns the result as JSON. `n` only matters for
// the δ̲ₙ case. Free the result with [`dilab_string_free`].
//
// # Safety
// `id` must be a nul-terminated string and `out_json` a valid pointer.
int32_t dilab_minimize_builtin(const char *id, uint32_t n, char **out_json);

// Runs a fold script and writes 1 to `out_ok` when the closed state has unit
// determinant, role-preserving ζ and no parity violations.
//
// # Safety
// `json` must be a nul-terminated string and `out_ok` a valid pointer.
int32_t dilab_fold_script_check(const char *json, int32_t *out_ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DILAB_H */
