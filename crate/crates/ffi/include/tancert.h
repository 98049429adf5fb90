#ifndef TANCERT_H
#define TANCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TancertCrossover {
  TANCERT_CROSSOVER_UPPER = 0,
  TANCERT_CROSSOVER_LOWER = 1,
} TancertCrossover;

typedef enum TancertError {
  TANCERT_ERROR_OK = 0,
  TANCERT_ERROR_NULL_POINTER = 1,
  TANCERT_ERROR_INVALID_UTF8 = 2,
  TANCERT_ERROR_UNKNOWN_ID = 3,
  TANCERT_ERROR_DOMAIN = 4,
  TANCERT_ERROR_NOT_POSITIVE = 5,
  TANCERT_ERROR_ORDER_MISMATCH = 6,
  TANCERT_ERROR_IDENTITY_MISMATCH = 7,
  TANCERT_ERROR_NO_SIGN_CHANGE = 8,
  TANCERT_ERROR_FORMAT = 9,
  TANCERT_ERROR_PANIC = 10,
} TancertError;

typedef enum TancertStatus {
  TANCERT_STATUS_CERTIFIED = 0,
  TANCERT_STATUS_UNDECIDED = 1,
  TANCERT_STATUS_FALSIFIED = 2,
} TancertStatus;

/**
 * Opaque certificate handle.
 */
typedef struct TancertCertificate TancertCertificate;

/**
 * Certifier settings; obtain defaults from `tancert_config_default`.
 */
typedef struct TancertConfig {
  double delta;
  double epsilon_max;
  uint32_t degree;
  uint32_t max_depth;
  double min_width;
  bool near_zero;
} TancertConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct TancertConfig tancert_config_default(void);

/**
 * Certifies inequality `id` (e.g. `"main_lower"`). `config` may be null for
 * defaults. On success `*out` receives a new handle.
 *
 * # Safety
 * `id` must be a NUL-terminated string, `config` null or valid, `out` valid.
 */
enum TancertError tancert_certify(const char *id,
                                  const struct TancertConfig *config,
                                  uint32_t threads,
                                  struct TancertCertificate **out);

/**
 * # Safety
 * `cert` must be a live handle and `out` valid.
 */
enum TancertError tancert_certificate_status(const struct TancertCertificate *cert,
                                             enum TancertStatus *out);

/**
 * # Safety
 * `cert` must be a live handle and `out` valid.
 */
enum TancertError tancert_certificate_box_count(const struct TancertCertificate *cert, size_t *out);

/**
 * Serializes the certificate; release the string with `tancert_string_free`.
 *
 * # Safety
 * `cert` must be a live handle and `out` valid.
 */
enum TancertError tancert_certificate_to_json(const struct TancertCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must be null or a handle not yet freed.
 */
void tancert_certificate_free(struct TancertCertificate *cert);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void tancert_string_free(char *s);

/**
 * Re-verifies a certificate given as JSON text. `*valid` is set even when
 * the certificate is rejected; the diagnoses go to the last error message.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `valid` valid.
 */
enum TancertError tancert_check_json(const char *json, bool *valid);

/**
 * `T_n` as a decimal string (it grows like `9^n`).
 *
 * # Safety
 * `out` must be valid.
 */
enum TancertError tancert_t_seq(uint32_t n, char **out);

/**
 * Certified bracket `[*lo, *hi]` of a crossover point.
 *
 * # Safety
 * `lo` and `hi` must be valid.
 */
enum TancertError tancert_crossover(enum TancertCrossover which,
                                    double tol,
                                    double *lo,
                                    double *hi);

/**
 * Exponent ratio at `x` with `bits` of working precision (not certified).
 *
 * # Safety
 * `out` must be valid.
 */
enum TancertError tancert_exponent_ratio(double x, uint32_t bits, double *out);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on this thread.
 */
const char *tancert_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TANCERT_H */
