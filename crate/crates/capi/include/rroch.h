#ifndef RROCH_H
#define RROCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum RrochStatus {
  RrochStatus_Ok = 0,
  RrochStatus_NullPointer = 1,
  RrochStatus_InvalidUtf8 = 2,
  RrochStatus_InvalidInput = 3,
  RrochStatus_MathError = 4,
  RrochStatus_Panic = 5,
} RrochStatus;

/**
 * Opaque handle to a truncated multivariate power series.
 */
typedef struct RrochSeries RrochSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Crate version as a static string; do not free.
 */
const char *rroch_version(void);

/**
 * Copy of the last error message on this thread, or NULL when none.
 * Free with `rroch_string_free`.
 */
char *rroch_last_error(void);

/**
 * Release a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must have been returned by an rroch function and not freed already.
 */
void rroch_string_free(char *s);

/**
 * Release a series handle. NULL is a no-op.
 *
 * # Safety
 * `s` must have been produced by an rroch constructor and not freed already.
 */
void rroch_series_free(struct RrochSeries *s);

/**
 * Parse human syntax like "1 - 2/3*x1^2*x2" into a series handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum RrochStatus rroch_series_parse(const char *text,
                                    uintptr_t nvars,
                                    uint32_t trunc,
                                    struct RrochSeries **out);

/**
 * Build a series from its sparse JSON form.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum RrochStatus rroch_series_from_json(const char *json, struct RrochSeries **out);

/**
 * Serialize a series to its sparse JSON form.
 *
 * # Safety
 * `s` must be a live series handle and `out` a valid pointer.
 */
enum RrochStatus rroch_series_to_json(const struct RrochSeries *s, char **out);

/**
 * Inverse of a unit (nonzero constant term), truncation-exact.
 *
 * # Safety
 * `a` must be a live series handle and `out` a valid pointer.
 */
enum RrochStatus rroch_series_invert_unit(const struct RrochSeries *a, struct RrochSeries **out);

/**
 * Divide a two-variable series by U - T: out JSON carries "q" and
 * "r" (the diagonal restriction).
 *
 * # Safety
 * `f` must be a live series handle and `out_json` a valid pointer.
 */
enum RrochStatus rroch_series_divide_diagonal(const struct RrochSeries *f, char **out_json);

/**
 * Weighted norm with per-variable radii (JSON array of "p/q" strings) and
 * exponent p ("a/b", 0 < p <= 1); out JSON carries "value" and "exact".
 *
 * # Safety
 * All pointer arguments must be valid; strings NUL-terminated.
 */
enum RrochStatus rroch_series_weighted_norm(const struct RrochSeries *s,
                                            const char *radii_json,
                                            const char *p,
                                            char **out_json);

/**
 * Weierstrass preparation at the given working order; out JSON carries
 * "k", "g", "u".
 *
 * # Safety
 * `f` must be a live series handle and `out_json` a valid pointer.
 */
enum RrochStatus rroch_weierstrass_prepare(const struct RrochSeries *f,
                                           uint32_t order,
                                           char **out_json);

/**
 * Division with remainder by a monic divisor; out JSON carries "q", "r".
 *
 * # Safety
 * `f` and `g` must be live series handles and `out_json` a valid pointer.
 */
enum RrochStatus rroch_weierstrass_divide(const struct RrochSeries *f,
                                          const struct RrochSeries *g,
                                          uint32_t order,
                                          char **out_json);

/**
 * chi(space, bundle) for catalog spaces; out JSON carries "chi" (exact
 * rational string) and "integer".
 *
 * # Safety
 * `space` and `bundle` must be NUL-terminated strings, `out_json` valid.
 */
enum RrochStatus rroch_hrr(const char *space, const char *bundle, char **out_json);

/**
 * Brute-force Euler characteristic oracle for O(k) on P^n.
 */
int64_t rroch_oracle_chi_proj(uint32_t n, int64_t k);

/**
 * hrr-vs-oracle sweep; out JSON carries "rows" and "all_match".
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum RrochStatus rroch_chi_table(uint32_t n, int64_t kmin, int64_t kmax, char **out_json);

/**
 * GRR pushforward comparison for a supported map; out JSON carries "lhs",
 * "rhs", "equal".
 *
 * # Safety
 * `map` must be a NUL-terminated string and `out_json` a valid pointer.
 */
enum RrochStatus rroch_grr_check(const char *map, int64_t a, int64_t b, int64_t m, char **out_json);

/**
 * Hochschild homology dimensions and the HKR verdict; out JSON carries
 * "hh" (per-level dims) and "hkr_pass".
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum RrochStatus rroch_hkr_check(uint32_t nvars, uint32_t degree_bound, char **out_json);

/**
 * Containment prover; out JSON carries "verdict" ("Proved"/"Unknown"),
 * the replayed "trace", and "replay_ok".
 *
 * # Safety
 * `lhs` and `rhs` must be NUL-terminated strings, `out_json` valid.
 */
enum RrochStatus rroch_locale_prove(const char *lhs,
                                    const char *rhs,
                                    uint32_t depth,
                                    char **out_json);

/**
 * Emptiness prover; out JSON carries "verdict" ("Empty"/"Unknown").
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out_json` a valid pointer.
 */
enum RrochStatus rroch_locale_empty(const char *expr, uint32_t depth, char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RROCH_H */
