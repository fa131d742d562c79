#ifndef DMOD_H
#define DMOD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Module kinds accepted by [`dmod_derham`].
 */
typedef enum DmodModuleKind {
  DMOD_MODULE_KIND_POLYNOMIAL_RING = 0,
  DMOD_MODULE_KIND_INJECTIVE_HULL = 1,
  DMOD_MODULE_KIND_LOCALIZATION = 2,
  DMOD_MODULE_KIND_LOCALIZATION_QUOTIENT = 3,
  DMOD_MODULE_KIND_RANK_ONE = 4,
} DmodModuleKind;

typedef enum DmodStatus {
  DMOD_STATUS_OK = 0,
  DMOD_STATUS_NULL_POINTER = 1,
  DMOD_STATUS_INVALID_UTF8 = 2,
  DMOD_STATUS_PARSE = 3,
  DMOD_STATUS_INVALID_INPUT = 4,
  DMOD_STATUS_NOT_REGULAR = 5,
  DMOD_STATUS_UNSUPPORTED = 6,
  DMOD_STATUS_OUT_OF_RANGE = 7,
  DMOD_STATUS_NOT_STABILIZED = 8,
  DMOD_STATUS_INTERNAL = 9,
  DMOD_STATUS_BUFFER_TOO_SMALL = 10,
  DMOD_STATUS_PANIC = 11,
} DmodStatus;

/**
 * Opaque Betti profile.
 */
typedef struct DmodProfile DmodProfile;

/**
 * Opaque structure report.
 */
typedef struct DmodReport DmodReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library on this thread; do not free.
 */
const char *dmod_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dmod_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void dmod_string_free(char *s);

/**
 * Builds a Betti profile `b_0 .. b_{2d}` (`len = 2d + 1`) of a
 * `d`-dimensional subvariety of `P^n`.
 *
 * # Safety
 * `betti` must point to `len` readable values; `out` must be writable.
 */
enum DmodStatus dmod_profile_new(size_t n,
                                 size_t d,
                                 const size_t *betti,
                                 size_t len,
                                 struct DmodProfile **out);

/**
 * Looks up a named catalog profile such as `"elliptic-p2"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum DmodStatus dmod_profile_from_catalog(const char *name, struct DmodProfile **out);

/**
 * # Safety
 * `p` must be NULL or a live handle from this library.
 */
void dmod_profile_free(struct DmodProfile *p);

/**
 * Structure report for a profile.
 *
 * # Safety
 * `profile` must be a live handle; `out` must be writable.
 */
enum DmodStatus dmod_predict(const struct DmodProfile *profile, struct DmodReport **out);

/**
 * # Safety
 * `r` must be NULL or a live handle from this library.
 */
void dmod_report_free(struct DmodReport *r);

/**
 * Number of copies of `E` in the quotient of the critical local
 * cohomology module (0 when it is simple). Returns 0 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t dmod_report_quotient_e_copies(const struct DmodReport *r);

/**
 * Copies `dim H^j_DR` of the critical module, `j = 0 .. n+1`, into `buf`.
 * `*len` receives the number of values; if `cap` is too small nothing is
 * copied and `DMOD_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `r` must be a live handle; `buf` must hold `cap` values; `len` writable.
 */
enum DmodStatus dmod_report_derham_dims(const struct DmodReport *r,
                                        size_t *buf,
                                        size_t cap,
                                        size_t *len);

/**
 * The report as JSON; free with [`dmod_string_free`].
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum DmodStatus dmod_report_to_json(const struct DmodReport *r, char **out);

/**
 * De Rham cohomology of a module, raising the pole cutoff up to
 * `max_cutoff`. `expr` is `f` for the localization kinds and `p` for
 * rank one, ignored otherwise; `vars = 0` infers it from `expr`.
 * Writes `{"dims": [...], "stabilized": bool, "report": {...}}` to
 * `out_json` and returns `DMOD_STATUS_NOT_STABILIZED` (with the JSON still
 * written) when the cutoffs did not agree.
 *
 * # Safety
 * `expr` must be NULL or NUL-terminated; `out_json` must be writable.
 */
enum DmodStatus dmod_derham(enum DmodModuleKind kind,
                            const char *expr,
                            size_t vars,
                            uint32_t max_cutoff,
                            char **out_json);

/**
 * Decomposes the polynomial `f` against the operator `p` (in `x0.., d0`)
 * modulo `(x1, ..)^precision`; writes the decomposition as JSON.
 *
 * # Safety
 * `p` and `f` must be NUL-terminated; `out_json` must be writable.
 */
enum DmodStatus dmod_decompose(const char *p, const char *f, uint32_t precision, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DMOD_H */
