#ifndef HYPERBALL_H
#define HYPERBALL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum HbStatus {
  HB_STATUS_OK = 0,
  HB_STATUS_NULL_POINTER = 1,
  HB_STATUS_OUTSIDE_BALL = 2,
  HB_STATUS_NOT_ON_SPHERE = 3,
  HB_STATUS_DIMENSION_MISMATCH = 4,
  HB_STATUS_UNSUPPORTED_DIMENSION = 5,
  HB_STATUS_SINGULAR = 6,
  HB_STATUS_INVALID_PARAMETER = 7,
  HB_STATUS_NON_CONVERGENCE = 8,
  HB_STATUS_STENCIL_OUTSIDE_BALL = 9,
  HB_STATUS_UNDECLARED_DECAY = 10,
  HB_STATUS_UNKNOWN_FIELD = 11,
  HB_STATUS_IO = 12,
  HB_STATUS_PARSE = 13,
  HB_STATUS_PANIC = 14,
} HbStatus;

/**
 * Opaque boundary field.
 */
typedef struct HbBoundaryField HbBoundaryField;

/**
 * Opaque source field.
 */
typedef struct HbSourceField HbSourceField;

/**
 * Quadrature resolution passed by value.
 */
typedef struct HbQuadrature {
  size_t sphere_order;
  size_t radial_order;
  double margin;
  double escalation;
} HbQuadrature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *hb_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *hb_version(void);

/**
 * Default orders and margin.
 */
struct HbQuadrature hb_quadrature_default(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void hb_string_free(char *s);

/**
 * `[x, y]` for points of the closed ball.
 *
 * # Safety
 * `x`, `y` point to `n` doubles; `out` is writable.
 */
enum HbStatus hb_bracket(const double *x, const double *y, size_t n, double *out);

/**
 * `phi_a(x)` written to `out` (`n` doubles).
 *
 * # Safety
 * `a`, `x` point to `n` doubles; `out` to `n` writable doubles.
 */
enum HbStatus hb_mobius(const double *a, const double *x, size_t n, double *out);

/**
 * Hyperbolic distance between interior points.
 *
 * # Safety
 * `a`, `b` point to `n` doubles; `out` is writable.
 */
enum HbStatus hb_hyperbolic_distance(const double *a, const double *b, size_t n, double *out);

/**
 * Poisson–Szegő kernel `P_h(x, t)`.
 *
 * # Safety
 * `x`, `t` point to `n` doubles; `out` is writable.
 */
enum HbStatus hb_poisson_szego(const double *x, const double *t, size_t n, double *out);

/**
 * Invariant Green function `G_h(x, y)`.
 *
 * # Safety
 * `x`, `y` point to `n` doubles; `out` is writable.
 */
enum HbStatus hb_green_h(const double *x, const double *y, size_t n, double *out);

/**
 * `(1/n) int_r^t (1-s^2)^{n-2} s^{1-n} ds`.
 *
 * # Safety
 * `out` is writable.
 */
enum HbStatus hb_green_g(size_t n, double r, double t, double *out);

/**
 * `q(t) = t^{n-2} g(t) / (1-t^2)^{n-1}` for `t` in `[0, 1]`.
 *
 * # Safety
 * `out` is writable.
 */
enum HbStatus hb_q_ratio(size_t n, double t, double *out);

/**
 * Gauss hypergeometric `2F1(a, b; c; s)` for `0 <= s <= 1`.
 *
 * # Safety
 * `out` is writable.
 */
enum HbStatus hb_hyp2f1(double a, double b, double c, double s, double *out);

/**
 * Parses a built-in boundary field (`constant:C`, `coordinate:K`, `identity`, ...).
 *
 * # Safety
 * `spec` is a NUL-terminated string; `out` is writable.
 */
enum HbStatus hb_boundary_field_new(const char *spec, size_t n, struct HbBoundaryField **out);

/**
 * # Safety
 * `field` comes from [`hb_boundary_field_new`] and is not used afterwards. Null is ignored.
 */
void hb_boundary_field_free(struct HbBoundaryField *field);

/**
 * Parses a built-in source field (`zero`, `linear`, `quadratic`, `decay`).
 *
 * # Safety
 * `spec` is a NUL-terminated string; `out` is writable.
 */
enum HbStatus hb_source_field_new(const char *spec, size_t n, struct HbSourceField **out);

/**
 * # Safety
 * `field` comes from [`hb_source_field_new`] and is not used afterwards. Null is ignored.
 */
void hb_source_field_free(struct HbSourceField *field);

/**
 * `P_h[phi](x)` into `out` (`n` doubles); `est_error` may be null.
 * A null `quad` selects the defaults.
 *
 * # Safety
 * Pointers follow the usual sizes: `x` and `out` hold `n` doubles.
 */
enum HbStatus hb_poisson_extension(const struct HbBoundaryField *phi,
                                   const double *x,
                                   size_t n,
                                   const struct HbQuadrature *quad,
                                   double *out,
                                   double *est_error);

/**
 * `G_h[psi](x)` into `out` (`n` doubles).
 *
 * # Safety
 * `x` and `out` hold `n` doubles.
 */
enum HbStatus hb_green_potential(const struct HbSourceField *psi,
                                 const double *x,
                                 size_t n,
                                 const struct HbQuadrature *quad,
                                 double *out);

/**
 * `u(x) = P_h[phi](x) - G_h[psi](x)` into `out` (`n` doubles).
 *
 * # Safety
 * `x` and `out` hold `n` doubles.
 */
enum HbStatus hb_represent(const struct HbBoundaryField *phi,
                           const struct HbSourceField *psi,
                           const double *x,
                           size_t n,
                           const struct HbQuadrature *quad,
                           double *out);

/**
 * Constant ledger as a JSON string (free with [`hb_string_free`]). When both
 * fields are non-null, `varrho` and `C2` are filled from `Du(0)`.
 *
 * # Safety
 * `out` is writable; field pointers are null or valid handles.
 */
enum HbStatus hb_constants_json(size_t n,
                                double l,
                                double m,
                                const struct HbBoundaryField *phi,
                                const struct HbSourceField *psi,
                                const struct HbQuadrature *quad,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERBALL_H */
