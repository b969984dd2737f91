#ifndef LATTICEK_H
#define LATTICEK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LkStatus {
  LK_STATUS_OK = 0,
  LK_STATUS_NULL_POINTER = 1,
  LK_STATUS_INVALID_STRING = 2,
  LK_STATUS_DOMAIN = 3,
  LK_STATUS_POLE = 4,
  LK_STATUS_NO_CONVERGENCE = 5,
  LK_STATUS_NOT_INTEGRABLE = 6,
  LK_STATUS_UNSUPPORTED = 7,
  LK_STATUS_PARSE = 8,
  LK_STATUS_SCHEMA = 9,
  LK_STATUS_DUPLICATE_ID = 10,
  LK_STATUS_IO = 11,
  LK_STATUS_OUT_OF_RANGE = 12,
  /**
   * Any other library error; see [`lk_last_error`].
   */
  LK_STATUS_NUMERIC = 13,
  LK_STATUS_PANIC = 14,
} LkStatus;

/**
 * A loaded registry: bundled or file records plus the generated ones.
 */
typedef struct LkRegistry LkRegistry;

/**
 * The result of a verification run.
 */
typedef struct LkReport LkReport;

typedef struct LkSummary {
  size_t records;
  size_t rows;
  size_t passed;
  size_t failed;
  size_t skipped;
} LkSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version; static storage.
 */
const char *lk_version(void);

/**
 * Message of the last failure on this thread (empty if none). Valid until
 * the next failing call on the same thread.
 */
const char *lk_last_error(void);

void lk_string_free(char *s);

/**
 * K(k) for 0 <= k < 1.
 */
enum LkStatus lk_ellint_k(double k, double *value);

/**
 * E(k) for 0 <= k <= 1.
 */
enum LkStatus lk_ellint_e(double k, double *value);

enum LkStatus lk_gamma(double x, double *value);

/**
 * L(s) for a character label: ZETA, ETA, LAMBDA, BETA, L-3, L-8, L8, L12,
 * L-24 or L24.
 */
enum LkStatus lk_lvalue(const char *label, double s, double *value);

/**
 * `int_0^1 poly(k) k^alpha k'^beta K^gamma K'^delta dk`. `poly` holds
 * `poly_len` coefficients, lowest degree first; null or empty means 1.
 * `error_estimate` may be null.
 */
enum LkStatus lk_k_integral(double alpha,
                            double beta,
                            double gamma,
                            double delta,
                            const double *poly,
                            size_t poly_len,
                            double tol,
                            double *value,
                            double *error_estimate);

/**
 * L(m, n, p; s) through its K integral.
 */
enum LkStatus lk_lattice_mellin(double m, double n, double p, double s, double *value);

/**
 * L(m, n, p; s) by direct summation over a ball of the given radius.
 */
enum LkStatus lk_lattice_direct(double m,
                                double n,
                                double p,
                                double s,
                                size_t radius,
                                double *value,
                                double *error_estimate);

/**
 * The polynomial p_n(k) of the even-power family, as text, with the
 * rational constant of its closed form. Both strings are caller-owned.
 */
enum LkStatus lk_even_power_polynomial(size_t n, char **poly, char **constant);

/**
 * The bundled registry.
 */
enum LkStatus lk_registry_bundled(struct LkRegistry **registry);

/**
 * A registry file (plus the generated records).
 */
enum LkStatus lk_registry_load(const char *path, struct LkRegistry **registry);

size_t lk_registry_len(const struct LkRegistry *registry);

/**
 * Id of record `index`, borrowed from the handle; null when out of range.
 */
const char *lk_registry_id(const struct LkRegistry *registry, size_t index);

void lk_registry_free(struct LkRegistry *registry);

/**
 * Verifies the records matching `filter` (null or "" for all) with up to
 * `threads` workers (0: default).
 */
enum LkStatus lk_registry_verify(const struct LkRegistry *registry,
                                 const char *filter,
                                 size_t threads,
                                 struct LkReport **report);

enum LkStatus lk_report_summary(const struct LkReport *report, struct LkSummary *summary);

/**
 * The report as JSON (`markdown` nonzero: as a markdown table); caller-owned.
 */
enum LkStatus lk_report_render(const struct LkReport *report, int32_t markdown, char **text);

void lk_report_free(struct LkReport *report);

/**
 * Record `index` in its registry JSON form; caller-owned.
 */
enum LkStatus lk_registry_record_json(const struct LkRegistry *registry, size_t index, char **text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATTICEK_H */
