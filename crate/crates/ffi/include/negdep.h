#ifndef NEGDEP_H
#define NEGDEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NdScheme {
  ND_SCHEME_STRATIFIED = 0,
  ND_SCHEME_LHS = 1,
  ND_SCHEME_PATTERSON = 2,
  ND_SCHEME_RSJ = 3,
} NdScheme;

typedef enum NdStatus {
  ND_STATUS_OK = 0,
  ND_STATUS_NULL_POINTER = 1,
  ND_STATUS_INVALID_ARGUMENT = 2,
  ND_STATUS_BUDGET_EXCEEDED = 3,
  ND_STATUS_UNSUPPORTED = 4,
  ND_STATUS_HYPOTHESIS_VIOLATED = 5,
  ND_STATUS_BUFFER_TOO_SMALL = 6,
  ND_STATUS_OUT_OF_RANGE = 7,
  ND_STATUS_INTERNAL = 8,
} NdStatus;

typedef enum NdShift {
  ND_SHIFT_GRID = 0,
  ND_SHIFT_TORUS = 1,
  ND_SHIFT_NONE = 2,
} NdShift;

// A generated point set.
typedef struct NdPointSet NdPointSet;

// A scheme description under construction.
typedef struct NdSpec NdSpec;

// Library version as a static nul-terminated string.
const char *nd_version(void);

// Copies the calling thread's last error message into `buf`. Returns the
// buffer size the message needs (0 when there is no error).
//
// # Safety
// `buf` must be null or valid for `cap` bytes.
size_t nd_last_error_message(char *buf, size_t cap);

// New scheme with the default flags for its kind (the full construction).
// Returns null for `dim == 0`.
struct NdSpec *nd_spec_new(enum NdScheme scheme, uint64_t n, uint32_t dim);

// # Safety
// `spec` must be null or a pointer from [`nd_spec_new`] not yet freed.
void nd_spec_free(struct NdSpec *spec);

// Fixes the lattice generator to the residues `g[0..len]`.
//
// # Safety
// `spec` must be a live handle and `g` valid for `len` reads.
enum NdStatus nd_spec_set_generator(struct NdSpec *spec, const uint64_t *g, size_t len);

// # Safety
// `spec` must be a live handle.
enum NdStatus nd_spec_set_shift(struct NdSpec *spec, enum NdShift shift);

// # Safety
// `spec` must be a live handle.
enum NdStatus nd_spec_set_jitter(struct NdSpec *spec, bool jitter);

// Draws one point set; `*out` receives a handle for [`nd_pointset_free`].
//
// # Safety
// `spec` must be a live handle and `out` writable.
enum NdStatus nd_generate(const struct NdSpec *spec, uint64_t seed, struct NdPointSet **out);

// # Safety
// `set` must be null or a handle from [`nd_generate`] not yet freed.
void nd_pointset_free(struct NdPointSet *set);

// Number of points, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
size_t nd_pointset_len(const struct NdPointSet *set);

// Dimension, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
size_t nd_pointset_dim(const struct NdPointSet *set);

// Coordinate `coord` of point `point` as the nearest double.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum NdStatus nd_pointset_get(const struct NdPointSet *set,
                              size_t point,
                              size_t coord,
                              double *out);

// Copies all coordinates row-major into `buf`, which must hold
// `len * dim` doubles.
//
// # Safety
// `set` must be a live handle and `buf` valid for `cap` writes.
enum NdStatus nd_pointset_copy(const struct NdPointSet *set, double *buf, size_t cap);

// Exact `P(p_1 in Q, p_2 in R)` and `P(p_1 in Q) P(p_2 in R)` for the
// anchored boxes `Q = [q, 1)`, `R = [r, 1)`. Anchors are comma lists of
// fractions or decimals (`"3/5,0.6"`), or a single value for every
// coordinate. The results are written as `"num/den"`. The enumeration budget
// follows `ND_BUDGET`.
//
// # Safety
// `spec` must be a live handle, `q` and `r` nul-terminated strings, and the
// output buffers valid for their capacities.
enum NdStatus nd_pair_box_prob(const struct NdSpec *spec,
                               const char *q,
                               const char *r,
                               char *joint,
                               size_t joint_cap,
                               char *product,
                               size_t product_cap);

// Scans the corner grid `(1/resolution) Z^d` for pairwise-dependence
// violations. `*violations` receives their count.
//
// # Safety
// `spec` must be a live handle and `violations` writable.
enum NdStatus nd_nuod_scan(const struct NdSpec *spec, uint64_t resolution, uint64_t *violations);

#endif  /* NEGDEP_H */
