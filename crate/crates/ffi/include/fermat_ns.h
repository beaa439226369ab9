#ifndef FERMAT_NS_H
#define FERMAT_NS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FnsStatus {
  FNS_STATUS_OK = 0,
  FNS_STATUS_NULL_POINTER = 1,
  FNS_STATUS_INVALID_ARGUMENT = 2,
  FNS_STATUS_NOT_FOUND = 3,
  FNS_STATUS_COMPUTATION_FAILED = 4,
  FNS_STATUS_PANIC = 5,
} FnsStatus;

typedef enum FnsVerdict {
  FNS_VERDICT_GENERATED = 0,
  FNS_VERDICT_INCONCLUSIVE = 1,
  FNS_VERDICT_FAILED = 2,
} FnsVerdict;

/**
 * Result of a certification run.
 */
typedef struct FnsCertificate FnsCertificate;

/**
 * Gram matrix of a line basis.
 */
typedef struct FnsGram FnsGram;

typedef struct FnsInvariants {
  uint64_t m;
  int64_t b2;
  int64_t pg;
  int64_t rho;
  int64_t lambda;
} FnsInvariants;

typedef struct FnsCover {
  uint64_t m;
  uint64_t r;
  uint64_t q;
  uint64_t p;
  uint32_t n;
} FnsCover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *fns_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fns_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *fns_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum FnsStatus fns_surface_invariants(uint64_t m, struct FnsInvariants *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum FnsStatus fns_find_cover(uint64_t m, struct FnsCover *out);

/**
 * Gram matrix of the rational line basis of degree `m`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FnsStatus fns_gram_rational(uint64_t m, struct FnsGram **out);

/**
 * Number of rows; 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t fns_gram_dim(const struct FnsGram *g);

/**
 * # Safety
 * `g` must be a live handle and `out` valid for writes.
 */
enum FnsStatus fns_gram_get(const struct FnsGram *g, size_t i, size_t j, int64_t *out);

/**
 * Exact determinant as a decimal string.
 *
 * # Safety
 * `g` must be a live handle and `out` valid for writes.
 */
enum FnsStatus fns_gram_discriminant(const struct FnsGram *g, char **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, not yet freed.
 */
void fns_gram_free(struct FnsGram *g);

/**
 * Discriminant-mode certification for `m` in {4, 5, 7, 11, 13}.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FnsStatus fns_certify_discriminant(uint64_t m, struct FnsCertificate **out);

/**
 * Duality-mode certification pinned to the bundled table.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FnsStatus fns_reproduce_table_row(uint64_t m, uint64_t seed, struct FnsCertificate **out);

/**
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
enum FnsStatus fns_certificate_verdict(const struct FnsCertificate *c, enum FnsVerdict *out);

/**
 * The certificate as JSON.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
enum FnsStatus fns_certificate_json(const struct FnsCertificate *c, char **out);

/**
 * # Safety
 * `c` must be NULL or a handle from this library, not yet freed.
 */
void fns_certificate_free(struct FnsCertificate *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FERMAT_NS_H */
