//! C interface. Objects are opaque handles released with their `_free`
//! function; every call returns a [`TlStatus`] and, on failure, leaves a
//! message retrievable with [`tl_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_traits::ToPrimitive;
use trunclab::complex::{complex_roots, ComplexRootSet};
use trunclab::config::ExperimentConfig;
use trunclab::exact::{parse_rational, Prime};
use trunclab::factor::{qp_root_count, Certainty};
use trunclab::padic::{newton_polygon, root_count_in_disk, Disk, NewtonPolygon};
use trunclab::poly::QPoly;
use trunclab::runner::run;
use trunclab::series::{SeriesDescription, SeriesSpec};
use trunclab::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TlStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Invariant = 3,
    NonConvergence = 4,
    Io = 5,
    InvalidUtf8 = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A polynomial with rational coefficients.
pub struct TlPoly(QPoly);

/// A catalogued power series.
pub struct TlSeries(SeriesSpec);

/// Newton polygon of a polynomial at a prime.
pub struct TlPolygon(NewtonPolygon);

/// Complex roots with multiplicities.
pub struct TlRoots(ComplexRootSet);

/// One edge of a Newton polygon; roots on it have valuation
/// `-slope_num / slope_den`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TlSegment {
    pub slope_num: i64,
    pub slope_den: i64,
    pub h_length: usize,
    pub ram_index: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(TlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Validation(_) | Error::Json(_) => TlStatus::Validation,
            Error::Invariant(_) => TlStatus::Invariant,
            Error::NonConvergence { .. } => TlStatus::NonConvergence,
            Error::Io(_) | Error::Csv(_) => TlStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> TlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside trunclab".into());
            TlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn prime(p: u64) -> Result<Prime, Failure> {
    Ok(Prime::new(p)?)
}

/// Length in bytes of the last error message on this thread, including
/// the terminating NUL; 1 when there is none.
#[no_mangle]
pub extern "C" fn tl_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len() + 1)
}

/// Copies the last error message into `buf` (at most `len` bytes, NUL
/// terminated, truncated if needed).
///
/// # Safety
/// `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tl_last_error_message(buf: *mut c_char, len: usize) -> TlStatus {
    if buf.is_null() || len == 0 {
        return TlStatus::NullPointer;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let n = msg.len().min(len - 1);
        std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
        *buf.add(n) = 0;
    });
    TlStatus::Ok
}

/// Builds a polynomial from `len` coefficient strings (`"3"`, `"-2/5"`),
/// constant term first.
///
/// # Safety
/// `coeffs` must point to `len` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_poly_from_coefficients(
    coeffs: *const *const c_char,
    len: usize,
    out: *mut *mut TlPoly,
) -> TlStatus {
    guard(|| {
        if coeffs.is_null() && len > 0 {
            return Err(null("coeffs"));
        }
        let mut c = Vec::with_capacity(len);
        for i in 0..len {
            c.push(parse_rational(text(*coeffs.add(i), "coefficient")?)?);
        }
        put(out, TlPoly(QPoly::new(c)))
    })
}

/// Degree of `poly`, or -1 for the zero polynomial.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_poly_degree(poly: *const TlPoly, out: *mut i64) -> TlStatus {
    guard(|| {
        let f = borrow(poly, "poly")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = f.0.degree().map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// # Safety
/// `poly` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tl_poly_free(poly: *mut TlPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Builds a series from its JSON description, e.g. `{"rule": "exp"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_series_from_json(json: *const c_char, out: *mut *mut TlSeries) -> TlStatus {
    guard(|| {
        let d: SeriesDescription = serde_json::from_str(text(json, "json")?).map_err(Error::from)?;
        put(out, TlSeries(d.build()?))
    })
}

/// Degree-`n` truncation of `series`.
///
/// # Safety
/// `series` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_series_truncate(series: *const TlSeries, n: usize, out: *mut *mut TlPoly) -> TlStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        put(out, TlPoly(s.0.truncate(n).poly))
    })
}

/// # Safety
/// `series` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tl_series_free(series: *mut TlSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Newton polygon of a nonzero polynomial at the prime `p`.
///
/// # Safety
/// `poly` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_newton_polygon(poly: *const TlPoly, p: u64, out: *mut *mut TlPolygon) -> TlStatus {
    guard(|| {
        let f = borrow(poly, "poly")?;
        put(out, TlPolygon(newton_polygon(&f.0, prime(p)?)?))
    })
}

/// Number of edges; 0 for a null handle.
///
/// # Safety
/// `polygon` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_polygon_segment_count(polygon: *const TlPolygon) -> usize {
    polygon.as_ref().map_or(0, |np| np.0.segments.len())
}

/// Edge `i`, left to right.
///
/// # Safety
/// `polygon` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_polygon_segment(polygon: *const TlPolygon, i: usize, out: *mut TlSegment) -> TlStatus {
    guard(|| {
        let np = borrow(polygon, "polygon")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = np.0.segments.get(i).ok_or_else(|| {
            Failure(TlStatus::OutOfRange, format!("segment {i} of {}", np.0.segments.len()))
        })?;
        let too_big = || Failure(TlStatus::OutOfRange, "slope does not fit in 64 bits".into());
        *out = TlSegment {
            slope_num: s.slope.numer().to_i64().ok_or_else(too_big)?,
            slope_den: s.slope.denom().to_i64().ok_or_else(too_big)?,
            h_length: s.h_length,
            ram_index: s.ram_index,
        };
        Ok(())
    })
}

/// # Safety
/// `polygon` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tl_polygon_free(polygon: *mut TlPolygon) {
    if !polygon.is_null() {
        drop(Box::from_raw(polygon));
    }
}

/// Roots of `poly` (with multiplicity) in the disk of centre `center` and
/// radius `p^-radius_exponent`; closed when `closed` is true.
///
/// # Safety
/// `poly` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_root_count_in_disk(
    poly: *const TlPoly,
    p: u64,
    center: *const c_char,
    radius_exponent: *const c_char,
    closed: bool,
    out: *mut usize,
) -> TlStatus {
    guard(|| {
        let f = borrow(poly, "poly")?;
        let c = parse_rational(text(center, "center")?)?;
        let r = parse_rational(text(radius_exponent, "radius_exponent")?)?;
        let disk = if closed { Disk::closed(c, r) } else { Disk::open(c, r) };
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = root_count_in_disk(&f.0, prime(p)?, &disk)?;
        Ok(())
    })
}

/// Number of roots in `Q_p`; `certified` is false when the lifting depth
/// bound was reached and the count is only a lower bound.
///
/// # Safety
/// `poly` must be a live handle; `count` and `certified` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_qp_root_count(
    poly: *const TlPoly,
    p: u64,
    count: *mut usize,
    certified: *mut bool,
) -> TlStatus {
    guard(|| {
        let f = borrow(poly, "poly")?;
        let r = qp_root_count(&f.0, prime(p)?)?;
        *count.as_mut().ok_or_else(|| null("count"))? = r.count;
        *certified.as_mut().ok_or_else(|| null("certified"))? = r.certainty == Certainty::Certified;
        Ok(())
    })
}

/// Complex roots; clusters within `tol` are merged.
///
/// # Safety
/// `poly` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_complex_roots(poly: *const TlPoly, tol: f64, seed: u64, out: *mut *mut TlRoots) -> TlStatus {
    guard(|| {
        let f = borrow(poly, "poly")?;
        put(out, TlRoots(complex_roots(&f.0, tol, seed)?))
    })
}

/// Number of distinct root clusters; 0 for a null handle.
///
/// # Safety
/// `roots` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_roots_len(roots: *const TlRoots) -> usize {
    roots.as_ref().map_or(0, |r| r.0.roots.len())
}

/// Cluster `i`: centre and multiplicity.
///
/// # Safety
/// `roots` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn tl_roots_get(
    roots: *const TlRoots,
    i: usize,
    re: *mut f64,
    im: *mut f64,
    multiplicity: *mut usize,
) -> TlStatus {
    guard(|| {
        let r = borrow(roots, "roots")?;
        let c = r.0.roots.get(i).ok_or_else(|| {
            Failure(TlStatus::OutOfRange, format!("root {i} of {}", r.0.roots.len()))
        })?;
        *re.as_mut().ok_or_else(|| null("re"))? = c.z.re;
        *im.as_mut().ok_or_else(|| null("im"))? = c.z.im;
        *multiplicity.as_mut().ok_or_else(|| null("multiplicity"))? = c.multiplicity;
        Ok(())
    })
}

/// # Safety
/// `roots` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tl_roots_free(roots: *mut TlRoots) {
    if !roots.is_null() {
        drop(Box::from_raw(roots));
    }
}

/// Runs an experiment config (JSON text) and writes its outputs to
/// `out_dir`. Same status codes as the command line tool.
///
/// # Safety
/// Both strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn tl_run_config(config_json: *const c_char, out_dir: *const c_char) -> TlStatus {
    guard(|| {
        let cfg = ExperimentConfig::parse(text(config_json, "config_json")?)?;
        run(&cfg, Some(Path::new(text(out_dir, "out_dir")?)))?;
        Ok(())
    })
}
