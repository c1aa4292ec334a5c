#ifndef BERNDENOM_H
#define BERNDENOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every exported function.
 */
typedef enum BdStatus {
  BD_STATUS_OK = 0,
  BD_STATUS_NULL_POINTER = 1,
  BD_STATUS_INVALID_ARGUMENT = 2,
  BD_STATUS_SIEVE_TOO_SMALL = 3,
  BD_STATUS_BUFFER_TOO_SMALL = 4,
  BD_STATUS_SIEVE_BUDGET = 5,
  BD_STATUS_INTERNAL = 6,
} BdStatus;

/**
 * Sequences available through [`bd_value`].
 */
typedef enum BdSequence {
  BD_SEQUENCE_DN = 0,
  BD_SEQUENCE_DD = 1,
  BD_SEQUENCE_DB = 2,
  BD_SEQUENCE_DS = 3,
  BD_SEQUENCE_DD_PLUS = 4,
  BD_SEQUENCE_DD_MINUS = 5,
  BD_SEQUENCE_DD_SHARED = 6,
  BD_SEQUENCE_DD_COPRIME = 7,
  BD_SEQUENCE_DD_COMPLEMENT = 8,
  BD_SEQUENCE_DB_K = 9,
} BdSequence;

/**
 * Fields readable from a [`BdProfile`] with [`bd_profile_field`].
 */
typedef enum BdField {
  BD_FIELD_DD = 0,
  BD_FIELD_DD_MINUS = 1,
  BD_FIELD_DD_PLUS = 2,
  BD_FIELD_DD_SHARED = 3,
  BD_FIELD_DD_COPRIME = 4,
  BD_FIELD_DD_COMPLEMENT = 5,
  BD_FIELD_DN = 6,
  BD_FIELD_DB = 7,
  BD_FIELD_DS = 8,
  BD_FIELD_RAD_N = 9,
  BD_FIELD_RAD_N1 = 10,
} BdField;

/**
 * All denominator quantities for one index.
 */
typedef struct BdProfile BdProfile;

/**
 * Sorted members of an exceptional set.
 */
typedef struct BdSet BdSet;

/**
 * Immutable prime table; may be shared across threads.
 */
typedef struct BdSieve BdSieve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *bd_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *bd_status_message(enum BdStatus status);

/**
 * Sum of the base-`p` digits of `n`.
 */
enum BdStatus bd_digit_sum(uint64_t n, uint64_t p, uint64_t *out);

/**
 * Builds a table of all primes `<= limit`.
 */
enum BdStatus bd_sieve_new(uint64_t limit, struct BdSieve **out);

/**
 * Builds a table large enough for every index `<= n`.
 */
enum BdStatus bd_sieve_for_index(uint64_t n, struct BdSieve **out);

uint64_t bd_sieve_limit(const struct BdSieve *sieve);

void bd_sieve_free(struct BdSieve *sieve);

/**
 * Writes the decimal value of `seq` at index `n` into `buf`.
 *
 * `k` is the derivative order for `BD_SEQUENCE_DB_K` and ignored otherwise.
 * `needed`, if non-NULL, receives the required buffer size including the NUL.
 */
enum BdStatus bd_value(const struct BdSieve *sieve,
                       enum BdSequence seq,
                       uint64_t n,
                       uint64_t k,
                       char *buf,
                       size_t len,
                       size_t *needed);

/**
 * `omega(D+(n))`, the number of primes `p > sqrt(n)` with `s_p(n) >= p`.
 */
enum BdStatus bd_omega_plus(const struct BdSieve *sieve, uint64_t n, uint64_t *out);

enum BdStatus bd_profile_new(const struct BdSieve *sieve, uint64_t n, struct BdProfile **out);

enum BdStatus bd_profile_field(const struct BdProfile *profile,
                               enum BdField field,
                               char *buf,
                               size_t len,
                               size_t *needed);

uint64_t bd_profile_omega_plus(const struct BdProfile *profile);

/**
 * 1 if `D(n) = rad(n+1)`, 0 otherwise (or for NULL).
 */
int32_t bd_profile_in_rad_set(const struct BdProfile *profile);

void bd_profile_free(struct BdProfile *profile);

/**
 * `{n <= limit : the k-th derivative of B_n(x) is integral}`.
 */
enum BdStatus bd_set_find(const struct BdSieve *sieve,
                          uint64_t k,
                          uint64_t limit,
                          struct BdSet **out);

/**
 * `{n <= limit : D(n) = rad(n+1)}`.
 */
enum BdStatus bd_radset_find(const struct BdSieve *sieve, uint64_t limit, struct BdSet **out);

size_t bd_set_len(const struct BdSet *set);

/**
 * Pointer to `bd_set_len(set)` ascending members; owned by `set`.
 */
const uint64_t *bd_set_members(const struct BdSet *set);

void bd_set_free(struct BdSet *set);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BERNDENOM_H */
