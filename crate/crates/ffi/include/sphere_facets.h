#ifndef SPHERE_FACETS_H
#define SPHERE_FACETS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  SF_STATUS_DEGENERATE = 3,
  SF_STATUS_UNSUPPORTED = 4,
  SF_STATUS_NO_STATISTICS = 5,
  SF_STATUS_NUMERICAL_FAILURE = 6,
  SF_STATUS_BUFFER_TOO_SMALL = 7,
  SF_STATUS_PANIC = 8,
  SF_STATUS_OTHER = 9,
} SfStatus;

/**
 * Opaque convex hull.
 */
typedef struct SfHull SfHull;

/**
 * Opaque point cloud on the unit sphere.
 */
typedef struct SfPointCloud SfPointCloud;

typedef struct SfFacetStats {
  double min_volume;
  double max_volume;
  double max_cap_height;
  double min_offset;
} SfFacetStats;

/**
 * One hull trial. Arc gaps are NaN unless `dim == 2`.
 */
typedef struct SfTrialSummary {
  uint32_t dim;
  uint64_t big_n;
  uint64_t facet_count;
  double min_facet_vol;
  double max_facet_vol;
  double max_cap_height;
  double min_offset;
  bool contains_origin;
  double min_arc_gap;
  double max_arc_gap;
  uint32_t resamples;
  uint32_t cap_bound_violations;
} SfTrialSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *sf_status_message(enum SfStatus status);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t sf_last_error(char *buf, size_t len);

/**
 * `count` uniform points on `S^{dim-1}` from stream `(seed, stream)`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SfStatus sf_cloud_sample(uint64_t seed,
                              uint64_t stream,
                              uint32_t dim,
                              size_t count,
                              struct SfPointCloud **out);

/**
 * Builds a cloud from `len` row-major coordinates; every row of `dim`
 * values must be a unit vector.
 *
 * # Safety
 * `coords` must be valid for `len` reads and `out` for a write.
 */
enum SfStatus sf_cloud_from_coords(const double *coords,
                                   size_t len,
                                   uint32_t dim,
                                   struct SfPointCloud **out);

/**
 * # Safety
 * `cloud` must be null or a live handle.
 */
size_t sf_cloud_len(const struct SfPointCloud *cloud);

/**
 * # Safety
 * `cloud` must be null or a live handle.
 */
uint32_t sf_cloud_dim(const struct SfPointCloud *cloud);

/**
 * Copies the row-major coordinates into `out` (`len >= dim * count`).
 *
 * # Safety
 * `cloud` must be a live handle and `out` valid for `len` writes.
 */
enum SfStatus sf_cloud_coords(const struct SfPointCloud *cloud, double *out, size_t len);

/**
 * # Safety
 * `cloud` must be null or a handle not yet freed.
 */
void sf_cloud_free(struct SfPointCloud *cloud);

/**
 * Convex hull of `cloud` (dimension at most 6).
 *
 * # Safety
 * `cloud` must be a live handle and `out` valid for a write.
 */
enum SfStatus sf_hull_build(const struct SfPointCloud *cloud, struct SfHull **out);

/**
 * # Safety
 * `hull` must be null or a live handle.
 */
size_t sf_hull_facet_count(const struct SfHull *hull);

/**
 * # Safety
 * `hull` must be null or a live handle.
 */
bool sf_hull_is_degenerate(const struct SfHull *hull);

/**
 * # Safety
 * `hull` must be null or a live handle.
 */
bool sf_hull_contains_origin(const struct SfHull *hull);

/**
 * Writes the `dim` vertex indices of facet `index` into `out`.
 *
 * # Safety
 * `hull` must be a live handle and `out` valid for `len` writes.
 */
enum SfStatus sf_hull_facet_vertices(const struct SfHull *hull,
                                     size_t index,
                                     uint32_t *out,
                                     size_t len);

/**
 * # Safety
 * `hull` must be a live handle and `out` valid for a write.
 */
enum SfStatus sf_hull_statistics(const struct SfHull *hull, struct SfFacetStats *out);

/**
 * # Safety
 * `hull` must be null or a handle not yet freed.
 */
void sf_hull_free(struct SfHull *hull);

/**
 * Area of the cap `{x in S^{n-1} : x_1 >= p}`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SfStatus sf_cap_area(uint32_t n, double p, double *out);

/**
 * Expected volume of the simplex spanned by `n` uniform points of `S^{n-1}`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SfStatus sf_miles_expected_volume(uint32_t n, double *out);

/**
 * One hull trial on `big_n` points drawn from stream `(seed, index)`;
 * the same stream always yields the same summary.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SfStatus sf_run_trial(uint64_t seed,
                           uint64_t index,
                           uint32_t n,
                           uint64_t big_n,
                           struct SfTrialSummary *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SPHERE_FACETS_H */
