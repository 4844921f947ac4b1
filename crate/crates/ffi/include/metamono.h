#ifndef METAMONO_H
#define METAMONO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MmStatus {
  MM_STATUS_OK = 0,
  MM_STATUS_NULL_POINTER = 1,
  MM_STATUS_CONFIG = 2,
  MM_STATUS_DOMAIN = 3,
  MM_STATUS_ZERO_NONCONVERGENCE = 4,
  MM_STATUS_NON_FINITE = 5,
  MM_STATUS_ILL_CONDITIONED = 6,
  MM_STATUS_DEGENERATE = 7,
  MM_STATUS_GROWTH_GUARD = 8,
  MM_STATUS_FORMAT = 9,
  MM_STATUS_IO = 10,
  MM_STATUS_CALLBACK = 11,
  MM_STATUS_PANIC = 12,
} MmStatus;

/**
 * Coefficients of an expansion together with its residual.
 */
typedef struct MmExpansion MmExpansion;

/**
 * Quadrature rule on the unit disk.
 */
typedef struct MmRule MmRule;

/**
 * Imaginary-time wave built from basis coefficients.
 */
typedef struct MmWave MmWave;

typedef struct MmQuaternion {
  double s;
  double i;
  double j;
  double k;
} MmQuaternion;

/**
 * Field sampled by [`mm_project`]. Writes `f(x, y)` to `out` and returns
 * 0, or returns nonzero to abort the projection.
 */
typedef int (*MmFieldCallback)(void *user, double x, double y, struct MmQuaternion *out);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty
 * string. Valid until the next call into this library on the thread.
 */
const char *mm_last_error(void);

/**
 * `J_n(x)`.
 *
 * # Safety
 * `out` must be NULL or valid for writing one `double`.
 */
enum MmStatus mm_bessel_j(uint32_t n, double x, double *out);

/**
 * The `m`-th positive zero `j_{n,m}` of `J_n`.
 *
 * # Safety
 * `out` must be NULL or valid for writing one `double`.
 */
enum MmStatus mm_bessel_zero(uint32_t n, uint32_t m, double *out);

/**
 * `F_n[lambda](x, y)`.
 *
 * # Safety
 * `out` must be NULL or valid for writing one `MmQuaternion`.
 */
enum MmStatus mm_eval_f(uint32_t n, double lambda, double x, double y, struct MmQuaternion *out);

/**
 * `F_{n,m}(x, y) = F_n[j_{n,m}](x, y)`.
 *
 * # Safety
 * `out` must be NULL or valid for writing one `MmQuaternion`.
 */
enum MmStatus mm_eval_fnm(uint32_t n, uint32_t m, double x, double y, struct MmQuaternion *out);

/**
 * Creates an `nr × ntheta` tensor rule.
 *
 * # Safety
 * `out` must be NULL or valid for writing one pointer.
 */
enum MmStatus mm_rule_new(uint32_t nr, uint32_t ntheta, struct MmRule **out);

/**
 * # Safety
 * `rule` must be NULL or a pointer from [`mm_rule_new`] not yet freed.
 */
void mm_rule_free(struct MmRule *rule);

/**
 * Number of nodes of `rule`.
 *
 * # Safety
 * `rule` must be a live handle; `out` valid for one `size_t`.
 */
enum MmStatus mm_rule_len(const struct MmRule *rule, size_t *out);

/**
 * Coordinates and weight of node `index`.
 *
 * # Safety
 * `rule` must be a live handle; `x`, `y` and `w` valid for one `double` each.
 */
enum MmStatus mm_rule_node(const struct MmRule *rule,
                           size_t index,
                           double *x,
                           double *y,
                           double *w);

/**
 * Expands the field given by `callback` in `F_{n,m}`, `n <= n_max`,
 * `m <= m_max`. The callback is invoked once per rule node, in node
 * order, on the calling thread.
 *
 * # Safety
 * `rule` must be a live handle, `callback` non-NULL and safe to call with
 * `user`, and `out` valid for writing one pointer.
 */
enum MmStatus mm_project(const struct MmRule *rule,
                         MmFieldCallback callback,
                         void *user,
                         double lambda,
                         uint32_t n_max,
                         uint32_t m_max,
                         struct MmExpansion **out);

/**
 * # Safety
 * `expansion` must be NULL or a pointer from [`mm_project`] not yet freed.
 */
void mm_expansion_free(struct MmExpansion *expansion);

/**
 * Number of coefficients, ordered `n` outer and `m` inner.
 *
 * # Safety
 * `expansion` must be a live handle; `out` valid for one `size_t`.
 */
enum MmStatus mm_expansion_len(const struct MmExpansion *expansion, size_t *out);

/**
 * Coefficient number `index` and its basis index `(n, m)`.
 *
 * # Safety
 * `expansion` must be a live handle; `n`, `m` and `coeff` valid for writing.
 */
enum MmStatus mm_expansion_coeff(const struct MmExpansion *expansion,
                                 size_t index,
                                 uint32_t *n,
                                 uint32_t *m,
                                 struct MmQuaternion *coeff);

/**
 * `L²` residual of the expansion and the norm of the expanded field.
 *
 * # Safety
 * `expansion` must be a live handle; `residual` and `field_norm` valid for writing.
 */
enum MmStatus mm_expansion_residual(const struct MmExpansion *expansion,
                                    double *residual,
                                    double *field_norm);

/**
 * The truncated series at `(x, y)`.
 *
 * # Safety
 * `expansion` must be a live handle; `out` valid for one `MmQuaternion`.
 */
enum MmStatus mm_expansion_eval(const struct MmExpansion *expansion,
                                double x,
                                double y,
                                struct MmQuaternion *out);

/**
 * Wave with coefficients `coeffs[i]` on `F_{ns[i], ms[i]}` and constant `k`.
 *
 * # Safety
 * `ns`, `ms` and `coeffs` must each point to `len` readable elements
 * (they may be NULL when `len` is 0); `out` valid for writing one pointer.
 */
enum MmStatus mm_wave_new(const uint32_t *ns,
                          const uint32_t *ms,
                          const struct MmQuaternion *coeffs,
                          size_t len,
                          double k,
                          struct MmWave **out);

/**
 * Wave whose initial data is the truncated expansion.
 *
 * # Safety
 * `expansion` must be a live handle; `out` valid for writing one pointer.
 */
enum MmStatus mm_wave_from_expansion(const struct MmExpansion *expansion,
                                     double k,
                                     struct MmWave **out);

/**
 * # Safety
 * `wave` must be NULL or a pointer from a `mm_wave_*` constructor not yet freed.
 */
void mm_wave_free(struct MmWave *wave);

/**
 * `v(x, y, t)`.
 *
 * # Safety
 * `wave` must be a live handle; `out` valid for one `MmQuaternion`.
 */
enum MmStatus mm_wave_eval(const struct MmWave *wave,
                           double x,
                           double y,
                           double t,
                           struct MmQuaternion *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METAMONO_H */
