#ifndef TRUNCLAB_H
#define TRUNCLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum TlStatus {
  TL_STATUS_OK = 0,
  TL_STATUS_NULL_POINTER = 1,
  TL_STATUS_VALIDATION = 2,
  TL_STATUS_INVARIANT = 3,
  TL_STATUS_NON_CONVERGENCE = 4,
  TL_STATUS_IO = 5,
  TL_STATUS_INVALID_UTF8 = 6,
  TL_STATUS_OUT_OF_RANGE = 7,
  TL_STATUS_PANIC = 8,
} TlStatus;

// A polynomial with rational coefficients.
typedef struct TlPoly TlPoly;

// Newton polygon of a polynomial at a prime.
typedef struct TlPolygon TlPolygon;

// Complex roots with multiplicities.
typedef struct TlRoots TlRoots;

// A catalogued power series.
typedef struct TlSeries TlSeries;

// One edge of a Newton polygon; roots on it have valuation
// `-slope_num / slope_den`.
typedef struct TlSegment {
  int64_t slope_num;
  int64_t slope_den;
  uintptr_t h_length;
  uintptr_t ram_index;
} TlSegment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length in bytes of the last error message on this thread, including
// the terminating NUL; 1 when there is none.
uintptr_t tl_last_error_length(void);

// Copies the last error message into `buf` (at most `len` bytes, NUL
// terminated, truncated if needed).
//
// # Safety
// `buf` must point to `len` writable bytes.
enum TlStatus tl_last_error_message(char *buf, uintptr_t len);

// Builds a polynomial from `len` coefficient strings (`"3"`, `"-2/5"`),
// constant term first.
//
// # Safety
// `coeffs` must point to `len` NUL-terminated strings; `out` must be writable.
enum TlStatus tl_poly_from_coefficients(const char *const *coeffs,
                                        uintptr_t len,
                                        struct TlPoly **out);

// Degree of `poly`, or -1 for the zero polynomial.
//
// # Safety
// `poly` must be a live handle and `out` writable.
enum TlStatus tl_poly_degree(const struct TlPoly *poly, int64_t *out);

// # Safety
// `poly` must come from this library and not be used afterwards.
void tl_poly_free(struct TlPoly *poly);

// Builds a series from its JSON description, e.g. `{"rule": "exp"}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` writable.
enum TlStatus tl_series_from_json(const char *json, struct TlSeries **out);

// Degree-`n` truncation of `series`.
//
// # Safety
// `series` must be a live handle; `out` writable.
enum TlStatus tl_series_truncate(const struct TlSeries *series, uintptr_t n, struct TlPoly **out);

// # Safety
// `series` must come from this library and not be used afterwards.
void tl_series_free(struct TlSeries *series);

// Newton polygon of a nonzero polynomial at the prime `p`.
//
// # Safety
// `poly` must be a live handle; `out` writable.
enum TlStatus tl_newton_polygon(const struct TlPoly *poly, uint64_t p, struct TlPolygon **out);

// Number of edges; 0 for a null handle.
//
// # Safety
// `polygon` must be null or a live handle.
uintptr_t tl_polygon_segment_count(const struct TlPolygon *polygon);

// Edge `i`, left to right.
//
// # Safety
// `polygon` must be a live handle; `out` writable.
enum TlStatus tl_polygon_segment(const struct TlPolygon *polygon,
                                 uintptr_t i,
                                 struct TlSegment *out);

// # Safety
// `polygon` must come from this library and not be used afterwards.
void tl_polygon_free(struct TlPolygon *polygon);

// Roots of `poly` (with multiplicity) in the disk of centre `center` and
// radius `p^-radius_exponent`; closed when `closed` is true.
//
// # Safety
// `poly` must be a live handle; strings NUL-terminated; `out` writable.
enum TlStatus tl_root_count_in_disk(const struct TlPoly *poly,
                                    uint64_t p,
                                    const char *center,
                                    const char *radius_exponent,
                                    bool closed,
                                    uintptr_t *out);

// Number of roots in `Q_p`; `certified` is false when the lifting depth
// bound was reached and the count is only a lower bound.
//
// # Safety
// `poly` must be a live handle; `count` and `certified` writable.
enum TlStatus tl_qp_root_count(const struct TlPoly *poly,
                               uint64_t p,
                               uintptr_t *count,
                               bool *certified);

// Complex roots; clusters within `tol` are merged.
//
// # Safety
// `poly` must be a live handle; `out` writable.
enum TlStatus tl_complex_roots(const struct TlPoly *poly,
                               double tol,
                               uint64_t seed,
                               struct TlRoots **out);

// Number of distinct root clusters; 0 for a null handle.
//
// # Safety
// `roots` must be null or a live handle.
uintptr_t tl_roots_len(const struct TlRoots *roots);

// Cluster `i`: centre and multiplicity.
//
// # Safety
// `roots` must be a live handle; outputs writable.
enum TlStatus tl_roots_get(const struct TlRoots *roots,
                           uintptr_t i,
                           double *re,
                           double *im,
                           uintptr_t *multiplicity);

// # Safety
// `roots` must come from this library and not be used afterwards.
void tl_roots_free(struct TlRoots *roots);

// Runs an experiment config (JSON text) and writes its outputs to
// `out_dir`. Same status codes as the command line tool.
//
// # Safety
// Both strings must be NUL-terminated.
enum TlStatus tl_run_config(const char *config_json, const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRUNCLAB_H */
