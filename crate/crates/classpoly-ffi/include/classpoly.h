/* C interface to the classpoly library. Regenerated by the crate build script. */

#ifndef CLASSPOLY_H
#define CLASSPOLY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status code returned by every interface function.
 */
typedef enum ClasspolyStatus {
  /*
   The call succeeded.
   */
  CLASSPOLY_STATUS_OK = 0,
  /*
   A required pointer argument was NULL.
   */
  CLASSPOLY_STATUS_NULL_ARGUMENT = 1,
  /*
   The discriminant is not negative and congruent to 0 or 1 mod 4.
   */
  CLASSPOLY_STATUS_INVALID_DISCRIMINANT = 2,
  /*
   The computation failed internally; the handle was not created.
   */
  CLASSPOLY_STATUS_COMPUTE_FAILED = 3,
  /*
   The coefficient index exceeds the polynomial degree.
   */
  CLASSPOLY_STATUS_INDEX_OUT_OF_RANGE = 4,
  /*
   The output buffer cannot hold the value; the required size was
   written to the size out-parameter.
   */
  CLASSPOLY_STATUS_BUFFER_TOO_SMALL = 5,
} ClasspolyStatus;

/*
 Opaque handle to a computed class polynomial.
 */
typedef struct ClasspolyHilbert ClasspolyHilbert;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Compute the Hilbert class polynomial of `discriminant` and store a handle
 in `*out`.

 # Safety
 `out` must be a valid pointer to writable memory for one pointer value.
 On any status other than `Ok`, `*out` is left untouched. A returned
 handle must be released with `classpoly_hilbert_free`.
 */
enum ClasspolyStatus classpoly_hilbert_compute(int64_t discriminant, struct ClasspolyHilbert **out);

/*
 Store the degree of the polynomial in `*degree`.

 # Safety
 `handle` must be a live pointer from `classpoly_hilbert_compute` and
 `degree` a valid pointer to writable memory for one u64.
 */
enum ClasspolyStatus classpoly_hilbert_degree(const struct ClasspolyHilbert *handle,
                                              uint64_t *degree);

/*
 Copy the coefficient of X^index as a NUL-terminated decimal string into
 `buf` and store the byte count including the terminator in `*size`.

 Call with `buf = NULL, buf_len = 0` to query the required size: the
 status is `BufferTooSmall` and `*size` holds it.

 # Safety
 `handle` must be a live pointer from `classpoly_hilbert_compute`, `size`
 a valid pointer to writable memory for one usize, and `buf` either NULL
 or valid for `buf_len` writable bytes.
 */
enum ClasspolyStatus classpoly_hilbert_coeff_decimal(const struct ClasspolyHilbert *handle,
                                                     uint64_t index,
                                                     char *buf,
                                                     size_t buf_len,
                                                     size_t *size);

/*
 Release a handle. NULL is accepted and ignored.

 # Safety
 `handle` must be NULL or a pointer from `classpoly_hilbert_compute` that
 has not been freed before.
 */
void classpoly_hilbert_free(struct ClasspolyHilbert *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLASSPOLY_H */
