#ifndef GREENDECAY_H
#define GREENDECAY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/*
 Result codes of every fallible function.
 */
typedef enum GdStatus {
  GdStatus_Ok = 0,
  GdStatus_NullPointer = 1,
  GdStatus_InvalidArgument = 2,
  GdStatus_ZeroPivot = 3,
  GdStatus_DominanceViolated = 4,
  GdStatus_NotRepresented = 5,
  GdStatus_Singular = 6,
  GdStatus_Io = 7,
  GdStatus_Parse = 8,
  GdStatus_Internal = 9,
} GdStatus;

/*
 Opaque lower Green generators of an inverse.
 */
typedef struct GdGenerators GdGenerators;

/*
 Opaque banded matrix.
 */
typedef struct GdMatrix GdMatrix;

/*
 Builds an `n×n` matrix from `n*n` row-major values; entries outside the
 band are ignored. Pass `r_upper >= n - 1` for a one-sided matrix.

 # Safety
 `values` must point to `n*n` readable doubles and `out` must be writable.
 */
enum GdStatus gd_matrix_new(size_t n,
                            size_t r_lower,
                            size_t r_upper,
                            const double *values,
                            struct GdMatrix **out);

/*
 Reads a Matrix Market coordinate file with inferred bandwidths.

 # Safety
 `path` must be a NUL-terminated string and `out` must be writable.
 */
enum GdStatus gd_matrix_from_mtx(const char *path, struct GdMatrix **out);

/*
 Releases a matrix. Null is ignored.

 # Safety
 `m` must come from a `gd_matrix_*` constructor and not be freed twice.
 */
void gd_matrix_free(struct GdMatrix *m);

/*
 Size and bandwidths of a matrix.

 # Safety
 `m` must be a live handle; the output pointers must be writable.
 */
enum GdStatus gd_matrix_shape(const struct GdMatrix *m,
                              size_t *n,
                              size_t *r_lower,
                              size_t *r_upper);

/*
 Strong dominance metric `mu` and smallest diagonal modulus. Succeeds even
 when `mu >= 1`; `satisfied` is set to 1 when `mu < 1` and no diagonal entry
 is zero.

 # Safety
 `m` must be a live handle; the output pointers must be writable.
 */
enum GdStatus gd_dominance(const struct GdMatrix *m,
                           double *mu,
                           double *min_diag,
                           int32_t *satisfied);

/*
 Constants of `|A^{-1}(i,j)| <= M gamma^(i-j)`, `i >= j`.

 # Safety
 `m` must be a live handle; the output pointers must be writable.
 */
enum GdStatus gd_lu_bound(const struct GdMatrix *m, double *big_m, double *gamma);

/*
 Varah's bound on `||A^{-1}||_1`.

 # Safety
 `m` must be a live handle; `out` must be writable.
 */
enum GdStatus gd_varah_bound(const struct GdMatrix *m, double *out);

/*
 Generators of the lower part of `A^{-1}` via the structured LU
 factorization (no pivoting).

 # Safety
 `m` must be a live handle; `out` must be writable.
 */
enum GdStatus gd_inverse_generators(const struct GdMatrix *m, struct GdGenerators **out);

/*
 Entry `(i, j)` of `A^{-1}` from its generators. Returns
 `GdStatus_NotRepresented` above the encoded region.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum GdStatus gd_generators_entry(const struct GdGenerators *g, size_t i, size_t j, double *out);

/*
 Releases a generator family. Null is ignored.

 # Safety
 `g` must come from [`gd_inverse_generators`] and not be freed twice.
 */
void gd_generators_free(struct GdGenerators *g);

/*
 Copies the last error message of this thread into `buf` (truncated,
 always NUL-terminated when `len > 0`). Returns the full message length
 without the terminator.

 # Safety
 `buf` must be writable for `len` bytes, or null with `len == 0`.
 */
size_t gd_last_error_message(char *buf, size_t len);

/*
 Static description of a status code.
 */
const char *gd_status_str(enum GdStatus status);

#endif  /* GREENDECAY_H */
