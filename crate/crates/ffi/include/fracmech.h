#ifndef FRACMECH_H
#define FRACMECH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the `fracmech` exit codes.
 */
typedef enum FmStatus {
  FM_STATUS_OK = 0,
  FM_STATUS_CHECK_FAILED = 1,
  FM_STATUS_INVALID_ARGUMENT = 2,
  FM_STATUS_DOMAIN = 3,
  FM_STATUS_NON_CONTRACTIVE = 4,
  FM_STATUS_MAX_ITER = 5,
  FM_STATUS_INTERNAL = 70,
} FmStatus;

typedef struct FmOscillator FmOscillator;

typedef struct FmPoly FmPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *fm_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void fm_string_free(char *s);

/**
 * Gamma function.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum FmStatus fm_gamma(double x, double *out);

/**
 * Applies operator `op` ("rl-int-left", "caputo-right", ...) of order
 * `alpha` to `n + 1` samples on the uniform grid over `[a, b]`.
 *
 * # Safety
 * `op` must be a NUL-terminated string; `values` and `out` must each hold
 * `n + 1` doubles.
 */
enum FmStatus fm_frac_apply(const char *op,
                            double alpha,
                            double a,
                            double b,
                            size_t n,
                            const double *values,
                            double *out);

/**
 * Creates an oscillator problem on `[a, b]` with `n` intervals.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum FmStatus fm_oscillator_new(double m_alpha,
                                double k,
                                double charge,
                                double field_e,
                                double alpha,
                                double a,
                                double b,
                                size_t n,
                                double e0,
                                double e1,
                                struct FmOscillator **out);

/**
 * The contraction estimate `rho`; NaN for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double fm_oscillator_contraction(const struct FmOscillator *h);

/**
 * Runs the fixed-point solver. On `FM_STATUS_MAX_ITER` the last iterate is
 * kept and can still be read.
 *
 * # Safety
 * `h` must be a live handle; `iterations` may be null.
 */
enum FmStatus fm_oscillator_solve(struct FmOscillator *h,
                                  double tol,
                                  size_t max_iter,
                                  size_t *iterations);

/**
 * Copies the last solution into `out`, which must hold `len = n + 1`
 * doubles.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for `len` writes.
 */
enum FmStatus fm_oscillator_solution(const struct FmOscillator *h, double *out, size_t len);

/**
 * # Safety
 * `h` must be null or a handle from [`fm_oscillator_new`], freed once.
 */
void fm_oscillator_free(struct FmOscillator *h);

/**
 * Parses a polynomial such as `"p_alpha^2/2 + q"`.
 *
 * # Safety
 * `text` must be NUL-terminated and `out` valid for one write.
 */
enum FmStatus fm_poly_parse(const char *text, struct FmPoly **out);

/**
 * The fractional Poisson bracket `[f, g]`.
 *
 * # Safety
 * `f` and `g` must be live handles and `out` valid for one write.
 */
enum FmStatus fm_poly_bracket(const struct FmPoly *f, const struct FmPoly *g, struct FmPoly **out);

/**
 * Canonical text of `p`; release with [`fm_string_free`]. Null on a null
 * handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
char *fm_poly_render(const struct FmPoly *p);

/**
 * # Safety
 * `p` must be null or a handle from this library, freed once.
 */
void fm_poly_free(struct FmPoly *p);

/**
 * Hamilton–Jacobi residual of the separated action at `(x, xbar, t)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum FmStatus fm_hj_residual(double m_alpha,
                             double k,
                             double charge,
                             double field_e,
                             double beta_sep,
                             double x,
                             double xbar,
                             double t,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACMECH_H */
