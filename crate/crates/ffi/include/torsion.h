#ifndef TORSION_H
#define TORSION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. `TORSION_STATUS_OK` is zero; the others mirror the error
// kinds of the core library plus three ABI-level failures.
typedef enum TorsionStatus {
  TORSION_STATUS_OK = 0,
  TORSION_STATUS_DIMENSION = 1,
  TORSION_STATUS_INDEX = 2,
  TORSION_STATUS_FIELD = 3,
  TORSION_STATUS_REDUCIBLE_MODULUS = 4,
  TORSION_STATUS_SIZE = 5,
  TORSION_STATUS_INCOMPLETE_LINK = 6,
  TORSION_STATUS_STRUCTURE = 7,
  TORSION_STATUS_LINK_AXIOM = 8,
  TORSION_STATUS_INCONSISTENT_ORDER = 9,
  TORSION_STATUS_MULTIPLICITY = 10,
  TORSION_STATUS_INVALID_INPUT = 11,
  TORSION_STATUS_PARSE = 12,
  TORSION_STATUS_DISCONNECTED = 13,
  TORSION_STATUS_EXHAUSTED = 14,
  TORSION_STATUS_IO = 15,
  TORSION_STATUS_NULL_POINTER = 16,
  TORSION_STATUS_UTF8 = 17,
  TORSION_STATUS_PANIC = 18,
} TorsionStatus;

// A finite Ã₂ quotient complex.
typedef struct TorsionComplex TorsionComplex;

// A finite quotient graph of a tree.
typedef struct TorsionGraph TorsionGraph;

// An integer matrix together with its Smith decomposition.
typedef struct TorsionMatrix TorsionMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or an empty string.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *torsion_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void torsion_string_free(char *s);

// Builds a `rows x cols` matrix from row-major entries and decomposes it.
//
// # Safety
// `entries` must point to `rows * cols` values; `out` must be writable.
enum TorsionStatus torsion_matrix_new(size_t rows,
                                      size_t cols,
                                      const int64_t *entries,
                                      struct TorsionMatrix **out);

// Parses the text matrix format (`rows cols` header, then one row per line).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum TorsionStatus torsion_matrix_parse(const char *text_ptr, struct TorsionMatrix **out);

// # Safety
// `m` must be null or a live handle from this library.
void torsion_matrix_free(struct TorsionMatrix *m);

// Writes the row and column counts.
//
// # Safety
// `m` must be a live handle; the out pointers must be writable.
enum TorsionStatus torsion_matrix_shape(const struct TorsionMatrix *m, size_t *rows, size_t *cols);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_matrix_rank(const struct TorsionMatrix *m, size_t *out);

// Invariant factors as a space-separated decimal string, zeros included.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_matrix_invariant_factors(const struct TorsionMatrix *m, char **out);

// Order of generator `index` in the cokernel, as a decimal string or
// `"infinite"`.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_matrix_element_order(const struct TorsionMatrix *m,
                                                size_t index,
                                                char **out);

// Parses the graph format (`vertex <id>`, `geom-edge <id> <u> <v>`).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum TorsionStatus torsion_graph_parse(const char *text_ptr, struct TorsionGraph **out);

// # Safety
// `g` must be null or a live handle from this library.
void torsion_graph_free(struct TorsionGraph *g);

// Order of `[I]` in the universal group of the tree relations.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_graph_identity_order(const struct TorsionGraph *g, char **out);

// Parses the complex format (`vertex`, `edge`, `chamber` lines).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum TorsionStatus torsion_complex_parse(const char *text_ptr, struct TorsionComplex **out);

// First one-vertex complex found by the chamber-system search for `q`.
//
// # Safety
// `out` must be writable.
enum TorsionStatus torsion_complex_search(uint64_t q, struct TorsionComplex **out);

// # Safety
// `c` must be null or a live handle from this library.
void torsion_complex_free(struct TorsionComplex *c);

// Vertex, edge and chamber counts.
//
// # Safety
// `c` must be a live handle; the out pointers must be writable.
enum TorsionStatus torsion_complex_counts(const struct TorsionComplex *c,
                                          size_t *n0,
                                          size_t *n1,
                                          size_t *n2);

// Checks every vertex link and writes the common projective plane order.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_complex_link_order(const struct TorsionComplex *c, uint64_t *out);

// Text form of the complex, readable by [`torsion_complex_parse`].
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_complex_to_text(const struct TorsionComplex *c, char **out);

// Order of `[I]` under the Ã₂ relations, with the M_k rows when
// `with_mk` is true.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum TorsionStatus torsion_complex_identity_order(const struct TorsionComplex *c,
                                                  bool with_mk,
                                                  char **out);

// The annihilator bound `m` for `(n, q, n0)` as a decimal string.
//
// # Safety
// `out` must be writable.
enum TorsionStatus torsion_bound(uint64_t n, uint64_t q, uint64_t n0, char **out);

// Coxeter length of the cyclic permutation `cycle_perm(n, k)`.
//
// # Safety
// `out` must be writable.
enum TorsionStatus torsion_weyl_length(size_t n, size_t k, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORSION_H */
