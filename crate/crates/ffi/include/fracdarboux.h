#ifndef FRACDARBOUX_H
#define FRACDARBOUX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum FdStatus {
  FD_STATUS_OK = 0,
  FD_STATUS_NULL_POINTER = 1,
  FD_STATUS_INVALID_UTF8 = 2,
  FD_STATUS_BUFFER_TOO_SMALL = 3,
  FD_STATUS_PANIC = 4,
  FD_STATUS_ZERO_DENOMINATOR = 10,
  FD_STATUS_POLE = 11,
  FD_STATUS_DEGENERATE_ODE = 12,
  FD_STATUS_SINGULAR_MAP = 13,
  FD_STATUS_RECONSTRUCTION = 14,
  FD_STATUS_POLE_CROSSING = 15,
  FD_STATUS_AFFINE_ONLY = 16,
  FD_STATUS_NOT_CONSTANT = 17,
  FD_STATUS_SINGULAR_BRANCH = 18,
  FD_STATUS_VANISHING_SEED = 19,
  FD_STATUS_INVALID_SEED = 20,
  FD_STATUS_EIGENVALUE_MISMATCH = 21,
  FD_STATUS_NORMALIZATION = 22,
  FD_STATUS_GRID = 23,
  FD_STATUS_DIMENSION_MISMATCH = 24,
  FD_STATUS_REFINEMENT = 25,
  FD_STATUS_ORACLE_INCONCLUSIVE = 26,
  FD_STATUS_ILL_CONDITIONED = 27,
  FD_STATUS_SYNTAX = 28,
  FD_STATUS_UNKNOWN_IDENTIFIER = 29,
  FD_STATUS_NON_INTEGER_EXPONENT = 30,
  FD_STATUS_INVALID_ARGUMENT = 31,
  FD_STATUS_IO = 32,
} FdStatus;

// Samples of a function on a uniform grid.
typedef struct FdGridFn FdGridFn;

// Mobius map with rational entries.
typedef struct FdMobius FdMobius;

// Linear second-order ODE `p w'' + q w' + r w = 0` with rational coefficients.
typedef struct FdOde FdOde;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated library version.
const char *fd_version(void);

// Message describing the last failure on this thread; empty after success.
//
// # Safety
// `buf` must be valid for `cap` bytes or null; `out_len` must be null or writable.
enum FdStatus fd_last_error_message(char *buf, size_t cap, size_t *out_len);

// Parses the three coefficients of an ODE.
//
// # Safety
// String arguments must be NUL-terminated or null; `out` must be writable.
enum FdStatus fd_ode_parse(const char *p,
                           const char *q,
                           const char *r,
                           const char *params,
                           struct FdOde **out);

// Releases an ODE handle. Null is ignored.
//
// # Safety
// `ode` must come from this library and not be used afterwards.
void fd_ode_free(struct FdOde *ode);

// Writes coefficient `which` (0 = p, 1 = q, 2 = r) as text.
//
// # Safety
// `ode` must be a live handle; `buf` valid for `cap` bytes or null.
enum FdStatus fd_ode_coefficient(const struct FdOde *ode,
                                 uint32_t which,
                                 char *buf,
                                 size_t cap,
                                 size_t *out_len);

// Parses a Mobius map `y = (alpha z + gamma)/(beta z + delta)`.
//
// # Safety
// String arguments must be NUL-terminated or null; `out` must be writable.
enum FdStatus fd_mobius_parse(const char *alpha,
                              const char *beta,
                              const char *gamma,
                              const char *delta,
                              const char *params,
                              struct FdMobius **out);

// Releases a map handle. Null is ignored.
//
// # Safety
// `map` must come from this library and not be used afterwards.
void fd_mobius_free(struct FdMobius *map);

// Image of `ode` under `map`, with denominators cleared.
//
// # Safety
// Handles must be live; `out` must be writable.
enum FdStatus fd_conformal_transform(const struct FdOde *ode,
                                     const struct FdMobius *map,
                                     struct FdOde **out);

// Invariant of the equation under affine changes of variable, as text.
//
// # Safety
// `ode` must be a live handle; `buf` valid for `cap` bytes or null.
enum FdStatus fd_invariant_beta0(const struct FdOde *ode, char *buf, size_t cap, size_t *out_len);

// Sets `*out` to whether the two equations share the affine-branch invariant.
//
// # Safety
// Handles must be live; `out` must be writable.
enum FdStatus fd_equivalent_beta0(const struct FdOde *a, const struct FdOde *b, bool *out);

// Integrates `ode` from `w(x0) = w0, w'(x0) = w0p` with RK4 on `n` nodes of
// `[a, b]` and carries the solution to the transformed equation.
//
// # Safety
// Handles must be live; `out` must be writable.
enum FdStatus fd_transport(const struct FdOde *ode,
                           const struct FdMobius *map,
                           double a,
                           double b,
                           size_t n,
                           double x0,
                           double w0,
                           double w0p,
                           struct FdGridFn **out);

// Potential `v` of the fractional Darboux transform of `-psi'' + u psi`
// built from two RK4 seeds at eigenvalue `c`. Seeds are `{x0, value, slope}`.
//
// # Safety
// `u` must be NUL-terminated; `seed1` and `seed2` must point to 3 doubles.
enum FdStatus fd_fractional_darboux(const char *u,
                                    const char *params,
                                    double c,
                                    const double *seed1,
                                    const double *seed2,
                                    double a,
                                    double b,
                                    size_t n,
                                    struct FdGridFn **out);

// Number of nodes, or 0 for a null handle.
//
// # Safety
// `f` must be a live handle or null.
size_t fd_gridfn_len(const struct FdGridFn *f);

// Copies nodes into `xs` and values into `values`; either may be null.
//
// # Safety
// Non-null arrays must hold `cap` doubles.
enum FdStatus fd_gridfn_copy(const struct FdGridFn *f, double *xs, double *values, size_t cap);

// Releases a grid function. Null is ignored.
//
// # Safety
// `f` must come from this library and not be used afterwards.
void fd_gridfn_free(struct FdGridFn *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACDARBOUX_H */
