#ifndef MARGULIS_H
#define MARGULIS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MgCone {
  MG_CONE_INTERIOR_PLUS = 0,
  MG_CONE_INTERIOR_MINUS = 1,
  MG_CONE_BOUNDARY = 2,
  MG_CONE_OUTSIDE = 3,
} MgCone;

typedef enum MgStatus {
  MG_STATUS_OK = 0,
  MG_STATUS_NULL_POINTER = 1,
  MG_STATUS_INVALID_ARGUMENT = 2,
  MG_STATUS_INVALID_LENGTH = 3,
  MG_STATUS_ELLIPTIC = 4,
  MG_STATUS_NOT_HYPERBOLIC = 5,
  MG_STATUS_KISSING = 6,
  MG_STATUS_OUTSIDE_CONE = 7,
  MG_STATUS_KISSING_UNRESOLVED = 8,
  MG_STATUS_NOT_DISJOINT = 9,
  MG_STATUS_CONFIG = 10,
  MG_STATUS_IO = 11,
  MG_STATUS_INTERNAL = 12,
} MgStatus;

typedef struct MgDeformation MgDeformation;

typedef struct MgDomain MgDomain;

typedef struct MgHolonomy MgHolonomy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread; empty if none. The
// pointer stays valid until the next failing call on this thread.
const char *mg_last_error_message(void);

// Holonomy of the structure with boundary lengths `ell_a, ell_b >= 0` and
// one-sided length `ell_x > 0`.
//
// # Safety
// `out` must be a valid pointer.
enum MgStatus mg_holonomy_new(double ell_a, double ell_b, double ell_x, struct MgHolonomy **out);

// # Safety
// `h` must be null or a handle from [`mg_holonomy_new`] not yet freed.
void mg_holonomy_free(struct MgHolonomy *h);

// Writes `(a, b, x, y)`.
//
// # Safety
// `h` must be a live handle and `out` must point to 4 doubles.
enum MgStatus mg_holonomy_trace_coords(const struct MgHolonomy *h, double *out);

// Writes `(ell_A, ell_B, ell_X, ell_Y, theta)`.
//
// # Safety
// `h` must be a live handle and `out` must point to 5 doubles.
enum MgStatus mg_holonomy_fricke(const struct MgHolonomy *h, double *out);

// Deformation with cocycle values `u(A) = u_a`, `u(X) = u_x`.
//
// # Safety
// `h` must be a live handle, `u_a` and `u_x` must point to 3 doubles, and
// `out` must be valid.
enum MgStatus mg_deformation_new(const struct MgHolonomy *h,
                                 const double *u_a,
                                 const double *u_x,
                                 struct MgDeformation **out);

// Deformation of the vertex coefficients `(r0, s0, rA, sA, rX, sX)`.
//
// # Safety
// `h` must be a live handle, `coefficients` must point to 6 doubles, and
// `out` must be valid.
enum MgStatus mg_deformation_from_vertices(const struct MgHolonomy *h,
                                           const double *coefficients,
                                           struct MgDeformation **out);

// # Safety
// `d` must be null or a live deformation handle.
void mg_deformation_free(struct MgDeformation *d);

// Margulis invariant of a word in `A, B, X, Y` (lower case for inverses).
//
// # Safety
// `d` must be a live handle, `word` a NUL-terminated string, `out` valid.
enum MgStatus mg_deformation_alpha(const struct MgDeformation *d, const char *word, double *out);

// Writes `(alpha_A, alpha_X, alpha_Y)`.
//
// # Safety
// `d` must be a live handle and `out` must point to 3 doubles.
enum MgStatus mg_deformation_mu(const struct MgDeformation *d, double *out);

// # Safety
// `d` must be a live handle and `out` valid.
enum MgStatus mg_deformation_cone(const struct MgDeformation *d, enum MgCone *out);

// Crooked domain of the vertex coefficients `(r0, s0, rA, sA, rX, sX)`.
// Non-strict coefficients fail with `KISSING` unless `resolve` is set.
//
// # Safety
// `h` must be a live handle, `coefficients` must point to 6 doubles, and
// `out` must be valid.
enum MgStatus mg_domain_build(const struct MgHolonomy *h,
                              const double *coefficients,
                              bool resolve,
                              struct MgDomain **out);

// # Safety
// `d` must be null or a live domain handle.
void mg_domain_free(struct MgDomain *d);

// Pairing, disjointness and word checks; `passed` receives the verdict.
//
// # Safety
// `d` must be a live handle and `passed` valid.
enum MgStatus mg_domain_verify(const struct MgDomain *d,
                               size_t depth,
                               size_t samples,
                               double radius,
                               double tol,
                               uint64_t seed,
                               bool *passed);

// Writes face `face` (0 to 3) as an OBJ mesh truncated at `radius`.
//
// # Safety
// `d` must be a live handle and `path` a NUL-terminated string.
enum MgStatus mg_domain_export_mesh(const struct MgDomain *d,
                                    size_t face,
                                    double radius,
                                    const char *path);

// Runs `holonomy`, `invariants` or `domain` on a JSON configuration and
// returns the JSON report in `out_json` (release with [`mg_string_free`]).
// `passed` receives the report verdict.
//
// # Safety
// `command` and `config_json` must be NUL-terminated strings; `out_json`
// and `passed` must be valid.
enum MgStatus mg_run_command(const char *command,
                             const char *config_json,
                             char **out_json,
                             bool *passed);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void mg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MARGULIS_H */
