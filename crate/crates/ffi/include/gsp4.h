#ifndef GSP4_H
#define GSP4_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Gsp4Status {
  GSP4_STATUS_OK = 0,
  GSP4_STATUS_NULL_POINTER = 1,
  GSP4_STATUS_VALIDATION = 2,
  GSP4_STATUS_INVARIANT = 3,
  GSP4_STATUS_INVALID_UTF8 = 4,
  GSP4_STATUS_PANIC = 5,
} Gsp4Status;

/**
 * The adjacency graph on W?(ρ̄).
 */
typedef struct Gsp4Graph Gsp4Graph;

/**
 * A validated tame presentation.
 */
typedef struct Gsp4Presentation Gsp4Presentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or NULL. Owned by the library;
 * valid until the next failing call on the same thread.
 */
const char *gsp4_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gsp4_string_free(char *s);

/**
 * Runs the root-datum self check.
 */
enum Gsp4Status gsp4_selfcheck(void);

/**
 * |Adm(λ)| for dominant λ = (a,b;c).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum Gsp4Status gsp4_adm_count(int64_t a, int64_t b, int64_t c, uintptr_t *out);

/**
 * Parses a presentation from JSON of the form {"p":37,"s":["s1"],"mu":[[16,8,0]]}.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum Gsp4Status gsp4_presentation_from_json(const char *json, struct Gsp4Presentation **out);

/**
 * # Safety
 * `h` must come from [`gsp4_presentation_from_json`] and not have been freed. NULL is ignored.
 */
void gsp4_presentation_free(struct Gsp4Presentation *h);

/**
 * Depth of the presentation's μ in the lowest alcove.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum Gsp4Status gsp4_presentation_depth(const struct Gsp4Presentation *h, int64_t *out);

/**
 * |W?(ρ̄)|.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum Gsp4Status gsp4_weight_count(const struct Gsp4Presentation *h, uintptr_t *out);

/**
 * Builds the graph with the default depth floors for the presentation's p.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum Gsp4Status gsp4_graph_build(const struct Gsp4Presentation *h, struct Gsp4Graph **out);

/**
 * # Safety
 * `g` must come from [`gsp4_graph_build`] and not have been freed. NULL is ignored.
 */
void gsp4_graph_free(struct Gsp4Graph *g);

/**
 * Vertex and edge counts, and whether the graph is connected.
 *
 * # Safety
 * `g` must be a live handle; output pointers must be valid.
 */
enum Gsp4Status gsp4_graph_stats(const struct Gsp4Graph *g,
                                 uintptr_t *vertices,
                                 uintptr_t *edges,
                                 bool *connected);

/**
 * The graph in Graphviz DOT form. Free the result with [`gsp4_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum Gsp4Status gsp4_graph_dot(const struct Gsp4Graph *g, char **out);

/**
 * The Iwahori shape of a 4×4 matrix over F_q, given as JSON rows of
 * {"coeffs": {exponent: "num/den"}}. Writes the shape as text, e.g. "t(1,0;1)·s2s1s2∨".
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum Gsp4Status gsp4_shape_of(const char *json, uint64_t q, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSP4_H */
