#ifndef EQIW_H
#define EQIW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum EqiwStatus {
  EQIW_STATUS_OK = 0,
  EQIW_STATUS_NULL_POINTER = 1,
  EQIW_STATUS_INVALID_UTF8 = 2,
  EQIW_STATUS_INVALID_PRIME = 3,
  EQIW_STATUS_INVALID_ARGUMENT = 4,
  EQIW_STATUS_PRECISION_TOO_LARGE = 5,
  EQIW_STATUS_NOT_INVERTIBLE = 6,
  EQIW_STATUS_RING_MISMATCH = 7,
  EQIW_STATUS_PRECISION_EXHAUSTED = 8,
  EQIW_STATUS_TRUNCATION_TOO_SMALL = 9,
  EQIW_STATUS_INDETERMINATE = 10,
  EQIW_STATUS_NONZERO_MU = 11,
  EQIW_STATUS_HYPOTHESIS = 12,
  EQIW_STATUS_NOT_EXACT = 13,
  EQIW_STATUS_SIZE_LIMIT = 14,
  EQIW_STATUS_INCONSISTENT = 15,
  EQIW_STATUS_SCHEMA = 16,
  EQIW_STATUS_IO = 17,
  EQIW_STATUS_OUT_OF_RANGE = 18,
  EQIW_STATUS_PANIC = 19,
} EqiwStatus;

/**
 * An abelian number field K ⊆ Q(ζ_f).
 */
typedef struct EqiwField EqiwField;

/**
 * Θ_{S,T}(1−m) ∈ Q[G], coefficients indexed by the group enumeration.
 */
typedef struct EqiwTheta EqiwTheta;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *eqiw_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `text` must come from this library and not have been freed.
 */
void eqiw_string_free(char *text);

/**
 * The subfield of Q(ζ_conductor) fixed by the subgroup of (Z/conductor)^×
 * generated by `kernel`.
 *
 * # Safety
 * `kernel` must point to `kernel_len` values; `out` must be writable.
 */
enum EqiwStatus eqiw_field_new(uint64_t conductor,
                               const uint64_t *kernel,
                               size_t kernel_len,
                               struct EqiwField **out);

/**
 * # Safety
 * `field` must come from `eqiw_field_new` and not have been freed.
 */
void eqiw_field_free(struct EqiwField *field);

/**
 * [K : Q], or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
size_t eqiw_field_degree(const struct EqiwField *field);

/**
 * Θ_{S,T}(1−m) for the finite places S and the set T.
 *
 * # Safety
 * `field` must be a live handle, `s`/`t` must point to `s_len`/`t_len`
 * values and `out` must be writable.
 */
enum EqiwStatus eqiw_theta_st(const struct EqiwField *field,
                              const uint64_t *s,
                              size_t s_len,
                              const uint64_t *t,
                              size_t t_len,
                              uint32_t m,
                              struct EqiwTheta **out);

/**
 * Number of coefficients, |G|; 0 for a null handle.
 *
 * # Safety
 * `theta` must be null or a live handle.
 */
size_t eqiw_theta_len(const struct EqiwTheta *theta);

/**
 * The coefficient at a group index as an exact fraction string "a" or
 * "a/b"; free it with `eqiw_string_free`.
 *
 * # Safety
 * `theta` must be a live handle and `out` writable.
 */
enum EqiwStatus eqiw_theta_coefficient(const struct EqiwTheta *theta, size_t index, char **out);

/**
 * # Safety
 * `theta` must come from `eqiw_theta_st` and not have been freed.
 */
void eqiw_theta_free(struct EqiwTheta *theta);

/**
 * Runs the check described by a fixture JSON document. On success the
 * report is written to `report` (free with `eqiw_string_free`) and the
 * verdict to `verdict`: 0 pass, 1 fail, 2 not applicable.
 *
 * # Safety
 * `fixture_json` must be a NUL-terminated string; `report` and `verdict`
 * must be writable.
 */
enum EqiwStatus eqiw_run_check_json(const char *fixture_json, char **report, int32_t *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQIW_H */
