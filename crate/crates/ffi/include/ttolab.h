#ifndef TTOLAB_H
#define TTOLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TtoStatus {
  TTO_STATUS_OK = 0,
  TTO_STATUS_NULL_POINTER = 1,
  TTO_STATUS_INVALID_ARGUMENT = 2,
  TTO_STATUS_OUTSIDE_DISC = 3,
  TTO_STATUS_NOT_A_TTO = 4,
  TTO_STATUS_NUMERICAL_FAILURE = 5,
  TTO_STATUS_PANIC = 6,
} TtoStatus;

/**
 * Result of `tto_classify`.
 */
typedef enum TtoTypeKind {
  TTO_TYPE_KIND_NO_TYPE = 0,
  TTO_TYPE_KIND_FINITE = 1,
  TTO_TYPE_KIND_INFINITY = 2,
  TTO_TYPE_KIND_SCALAR = 3,
} TtoTypeKind;

/**
 * Opaque handle to a model space.
 */
typedef struct TtoSpace TtoSpace;

typedef struct TtoComplex {
  double re;
  double im;
} TtoComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length, 0 if there is none.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t tto_last_error_message(char *buf, size_t len);

/**
 * Creates the model space of the Blaschke product with the given zeros
 * (repeated for multiplicity) and unimodular `rotation`.
 *
 * # Safety
 * `zeros` must point to `n_zeros` values; `out` must be a valid pointer.
 */
enum TtoStatus tto_space_new(const struct TtoComplex *zeros,
                             size_t n_zeros,
                             struct TtoComplex rotation,
                             struct TtoSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from `tto_space_new` not yet freed.
 */
void tto_space_free(struct TtoSpace *space);

/**
 * Dimension of the space, 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t tto_space_dim(const struct TtoSpace *space);

/**
 * # Safety
 * `space` must be a live handle; `out` a valid pointer.
 */
enum TtoStatus tto_blaschke_eval(const struct TtoSpace *space,
                                 struct TtoComplex z,
                                 struct TtoComplex *out);

/**
 * Writes `S_α` (the compressed shift when `alpha` is 0).
 *
 * # Safety
 * `space` must be a live handle; `out` must hold `dim * dim` values.
 */
enum TtoStatus tto_generalized_shift(const struct TtoSpace *space,
                                     struct TtoComplex alpha,
                                     struct TtoComplex *out);

/**
 * Builds `A_{φ + conj ψ + c}` from coordinate vectors `phi`, `psi` (either
 * may be null for zero) and the constant `c`.
 *
 * # Safety
 * `space` must be a live handle; `phi`, `psi` null or of length `dim`; `out`
 * must hold `dim * dim` values.
 */
enum TtoStatus tto_build(const struct TtoSpace *space,
                         const struct TtoComplex *phi,
                         const struct TtoComplex *psi,
                         struct TtoComplex c,
                         struct TtoComplex *out);

/**
 * Membership test; `residual` may be null.
 *
 * # Safety
 * `space` must be a live handle; `matrix` must hold `dim * dim` values.
 */
enum TtoStatus tto_is_tto(const struct TtoSpace *space,
                          const struct TtoComplex *matrix,
                          bool *is_member,
                          double *residual);

/**
 * Type of a truncated Toeplitz operator. `value` is written only for
 * `TtoTypeKind::Finite` and may be null.
 *
 * # Safety
 * `space` must be a live handle; `matrix` must hold `dim * dim` values.
 */
enum TtoStatus tto_classify(const struct TtoSpace *space,
                            const struct TtoComplex *matrix,
                            enum TtoTypeKind *kind,
                            struct TtoComplex *value);

/**
 * Clark points (solutions of `u = α`, sorted by argument) and weights for a
 * unimodular `alpha`. Both buffers must hold `dim` values.
 *
 * # Safety
 * `space` must be a live handle; `points` and `weights` must hold `dim` values.
 */
enum TtoStatus tto_clark(const struct TtoSpace *space,
                         struct TtoComplex alpha,
                         struct TtoComplex *points,
                         double *weights);

/**
 * Matrix of the Crofoot transform onto `K_u` for `alpha` in the open disc.
 *
 * # Safety
 * `space` must be a live handle; `out` must hold `dim * dim` values.
 */
enum TtoStatus tto_crofoot_matrix(const struct TtoSpace *space,
                                  struct TtoComplex alpha,
                                  struct TtoComplex *out);

/**
 * Runs the self-verification suite. `passed` receives the overall verdict;
 * on a failing check its key is available through `tto_last_error_message`.
 *
 * # Safety
 * `space` must be a live handle; `passed` a valid pointer.
 */
enum TtoStatus tto_verify_all(const struct TtoSpace *space,
                              uint64_t seed,
                              size_t trials,
                              bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TTOLAB_H */
