#ifndef SHARPINEQ_H
#define SHARPINEQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes shared by all functions.
typedef enum SharpineqStatus {
  SHARPINEQ_STATUS_OK = 0,
  SHARPINEQ_STATUS_NULL_POINTER = 1,
  SHARPINEQ_STATUS_INVALID_UTF8 = 2,
  SHARPINEQ_STATUS_PARSE_ERROR = 3,
  SHARPINEQ_STATUS_DOMAIN_ERROR = 4,
  SHARPINEQ_STATUS_CONVERGENCE_ERROR = 5,
  SHARPINEQ_STATUS_UNSUPPORTED = 6,
  SHARPINEQ_STATUS_INVARIANT_VIOLATION = 7,
  SHARPINEQ_STATUS_PANIC = 8,
} SharpineqStatus;

// Opaque model-space handle.
typedef struct SharpineqSpace SharpineqSpace;

// Sharp constants for one `(n, p, alpha, avr)`.
typedef struct SharpineqConstants {
  double omega_n;
  double at;
  double theta;
  double gn;
  double sobolev;
  double gn_sharp;
  double fk;
  double rayleigh;
  double avr;
} SharpineqConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *sharpineq_last_error(void);

// Library version as a static NUL-terminated string.
const char *sharpineq_version(void);

// Create a model space from a `key=value` descriptor.
//
// # Safety
// `descriptor` must be null or a valid NUL-terminated string; `out` must be
// null or valid for writes.
enum SharpineqStatus sharpineq_space_new(const char *descriptor, struct SharpineqSpace **out);

// Release a handle; null is ignored.
//
// # Safety
// `space` must be null or a handle from [`sharpineq_space_new`] not yet freed.
void sharpineq_space_free(struct SharpineqSpace *space);

// Effective dimension `N`.
//
// # Safety
// `space` must be null or a live handle; `out` must be null or valid for writes.
enum SharpineqStatus sharpineq_space_dimension(const struct SharpineqSpace *space, double *out);

// Asymptotic volume ratio.
//
// # Safety
// As for [`sharpineq_space_dimension`].
enum SharpineqStatus sharpineq_space_avr(const struct SharpineqSpace *space, double *out);

// Measure of the ball of radius `r` about the pole.
//
// # Safety
// As for [`sharpineq_space_dimension`].
enum SharpineqStatus sharpineq_space_vol_ball(const struct SharpineqSpace *space,
                                              double r,
                                              double *out);

// Minkowski content (perimeter) of the ball of radius `r`.
//
// # Safety
// As for [`sharpineq_space_dimension`].
enum SharpineqStatus sharpineq_space_minkowski_content(const struct SharpineqSpace *space,
                                                       double r,
                                                       double *out);

// First Dirichlet eigenvalue of the ball of radius `radius`.
//
// # Safety
// As for [`sharpineq_space_dimension`].
enum SharpineqStatus sharpineq_fk_eigenvalue(const struct SharpineqSpace *space,
                                             double radius,
                                             double *out);

// All sharp constants; `alpha <= 0` selects the Sobolev endpoint `n/(n-p)`.
//
// # Safety
// `out` must be null or valid for writes.
enum SharpineqStatus sharpineq_sharp_constants(double n,
                                               double p,
                                               double alpha,
                                               double avr,
                                               struct SharpineqConstants *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SHARPINEQ_H */
