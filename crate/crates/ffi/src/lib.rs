//! C ABI over `sphere_facets`.
//!
//! Objects cross the boundary as opaque handles (`SfPointCloud`, `SfHull`)
//! that the caller frees with the matching `*_free`. Every fallible call
//! returns an [`SfStatus`]; on failure a description is available from
//! [`sf_last_error`] on the same thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sphere_facets::caps::cap_area;
use sphere_facets::extremal::run_trial;
use sphere_facets::hull::{convex_hull, HullResult};
use sphere_facets::simplex_law::miles_expected_volume;
use sphere_facets::{sample_sphere, Error, PointCloud, RngStream};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    Unsupported = 4,
    NoStatistics = 5,
    NumericalFailure = 6,
    BufferTooSmall = 7,
    Panic = 8,
    Other = 9,
}

/// Opaque point cloud on the unit sphere.
pub struct SfPointCloud(PointCloud);

/// Opaque convex hull.
pub struct SfHull(HullResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SfFacetStats {
    pub min_volume: f64,
    pub max_volume: f64,
    pub max_cap_height: f64,
    pub min_offset: f64,
}

/// One hull trial. Arc gaps are NaN unless `dim == 2`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SfTrialSummary {
    pub dim: u32,
    pub big_n: u64,
    pub facet_count: u64,
    pub min_facet_vol: f64,
    pub max_facet_vol: f64,
    pub max_cap_height: f64,
    pub min_offset: f64,
    pub contains_origin: bool,
    pub min_arc_gap: f64,
    pub max_arc_gap: f64,
    pub resamples: u32,
    pub cap_bound_violations: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SfStatus {
    match e {
        Error::InvalidArgument(_) | Error::InvalidInput(_) => SfStatus::InvalidArgument,
        Error::DegenerateSimplex { .. } => SfStatus::Degenerate,
        Error::Unsupported(_) => SfStatus::Unsupported,
        Error::NoStatistics => SfStatus::NoStatistics,
        Error::NumericalFailure(_) => SfStatus::NumericalFailure,
        _ => SfStatus::Other,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SfStatus, String)>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SfStatus::Panic
        }
    }
}

fn lib<T>(r: sphere_facets::Result<T>) -> Result<T, (SfStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SfStatus, String) {
    (SfStatus::NullPointer, format!("{what} is null"))
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn sf_status_message(status: SfStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SfStatus::Ok => b"ok\0",
        SfStatus::NullPointer => b"null pointer argument\0",
        SfStatus::InvalidArgument => b"invalid argument\0",
        SfStatus::Degenerate => b"degenerate configuration\0",
        SfStatus::Unsupported => b"unsupported dimension or mode\0",
        SfStatus::NoStatistics => b"no statistics available\0",
        SfStatus::NumericalFailure => b"numerical failure\0",
        SfStatus::BufferTooSmall => b"output buffer too small\0",
        SfStatus::Panic => b"internal panic\0",
        SfStatus::Other => b"error\0",
    };
    s.as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sf_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// `count` uniform points on `S^{dim-1}` from stream `(seed, stream)`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_cloud_sample(seed: u64, stream: u64, dim: u32, count: usize, out: *mut *mut SfPointCloud) -> SfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = lib(sample_sphere(&RngStream::new(seed, stream), dim as usize, count))?;
        *out = Box::into_raw(Box::new(SfPointCloud(c)));
        Ok(())
    })
}

/// Builds a cloud from `len` row-major coordinates; every row of `dim`
/// values must be a unit vector.
///
/// # Safety
/// `coords` must be valid for `len` reads and `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_cloud_from_coords(coords: *const f64, len: usize, dim: u32, out: *mut *mut SfPointCloud) -> SfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let data = std::slice::from_raw_parts(coords, len).to_vec();
        let c = lib(PointCloud::new(dim as usize, data))?;
        *out = Box::into_raw(Box::new(SfPointCloud(c)));
        Ok(())
    })
}

/// # Safety
/// `cloud` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_cloud_len(cloud: *const SfPointCloud) -> usize {
    cloud.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `cloud` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_cloud_dim(cloud: *const SfPointCloud) -> u32 {
    cloud.as_ref().map_or(0, |c| c.0.dim() as u32)
}

/// Copies the row-major coordinates into `out` (`len >= dim * count`).
///
/// # Safety
/// `cloud` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sf_cloud_coords(cloud: *const SfPointCloud, out: *mut f64, len: usize) -> SfStatus {
    guard(|| {
        let c = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let src = c.0.coords();
        if len < src.len() {
            return Err((SfStatus::BufferTooSmall, format!("need {} doubles, got {len}", src.len())));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
        Ok(())
    })
}

/// # Safety
/// `cloud` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_cloud_free(cloud: *mut SfPointCloud) {
    if !cloud.is_null() {
        drop(Box::from_raw(cloud));
    }
}

/// Convex hull of `cloud` (dimension at most 6).
///
/// # Safety
/// `cloud` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_build(cloud: *const SfPointCloud, out: *mut *mut SfHull) -> SfStatus {
    guard(|| {
        let c = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let h = lib(convex_hull(&c.0))?;
        *out = Box::into_raw(Box::new(SfHull(h)));
        Ok(())
    })
}

/// # Safety
/// `hull` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_facet_count(hull: *const SfHull) -> usize {
    hull.as_ref().map_or(0, |h| h.0.facets.len())
}

/// # Safety
/// `hull` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_is_degenerate(hull: *const SfHull) -> bool {
    hull.as_ref().is_none_or(|h| h.0.degenerate)
}

/// # Safety
/// `hull` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_contains_origin(hull: *const SfHull) -> bool {
    hull.as_ref().is_some_and(|h| h.0.contains_origin)
}

/// Writes the `dim` vertex indices of facet `index` into `out`.
///
/// # Safety
/// `hull` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_facet_vertices(hull: *const SfHull, index: usize, out: *mut u32, len: usize) -> SfStatus {
    guard(|| {
        let h = hull.as_ref().ok_or_else(|| null("hull"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = h.0.facets.get(index).ok_or_else(|| {
            (SfStatus::InvalidArgument, format!("facet {index} out of range ({} facets)", h.0.facets.len()))
        })?;
        let v = f.vertices();
        if len < v.len() {
            return Err((SfStatus::BufferTooSmall, format!("need {} indices, got {len}", v.len())));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// # Safety
/// `hull` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_statistics(hull: *const SfHull, out: *mut SfFacetStats) -> SfStatus {
    guard(|| {
        let h = hull.as_ref().ok_or_else(|| null("hull"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = lib(h.0.statistics())?;
        *out = SfFacetStats {
            min_volume: s.min_volume,
            max_volume: s.max_volume,
            max_cap_height: s.max_cap_height,
            min_offset: s.min_offset,
        };
        Ok(())
    })
}

/// # Safety
/// `hull` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_hull_free(hull: *mut SfHull) {
    if !hull.is_null() {
        drop(Box::from_raw(hull));
    }
}

/// Area of the cap `{x in S^{n-1} : x_1 >= p}`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_cap_area(n: u32, p: f64, out: *mut f64) -> SfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lib(cap_area(n, p))?;
        Ok(())
    })
}

/// Expected volume of the simplex spanned by `n` uniform points of `S^{n-1}`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_miles_expected_volume(n: u32, out: *mut f64) -> SfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lib(miles_expected_volume(n))?;
        Ok(())
    })
}

/// One hull trial on `big_n` points drawn from stream `(seed, index)`;
/// the same stream always yields the same summary.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sf_run_trial(seed: u64, index: u64, n: u32, big_n: u64, out: *mut SfTrialSummary) -> SfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let t = lib(run_trial(&RngStream::new(seed, index), n, big_n))?;
        *out = SfTrialSummary {
            dim: t.n,
            big_n: t.big_n,
            facet_count: t.facet_count,
            min_facet_vol: t.min_facet_vol,
            max_facet_vol: t.max_facet_vol,
            max_cap_height: t.max_cap_height,
            min_offset: t.min_offset,
            contains_origin: t.contains_origin,
            min_arc_gap: t.min_arc_gap.unwrap_or(f64::NAN),
            max_arc_gap: t.max_arc_gap.unwrap_or(f64::NAN),
            resamples: t.resamples,
            cap_bound_violations: t.cap_bound_violations,
        };
        Ok(())
    })
}
