//! C ABI over the optcut library.
//!
//! Objects are opaque handles created by `*_new` or an operation and
//! released by the matching `*_free`; `NULL` is accepted by every free
//! function. Functions return an `OptcutStatus`; on failure the message is
//! kept per thread and read with `optcut_last_error`. Strings returned to
//! the caller are owned by the caller and released with `optcut_string_free`.
//!
//! The header is `include/optcut.h`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use optcut::bootstrap::{run_bootstrap, summarize_bootstrap, BootConfig};
use optcut::{build_roc, estimate, CutpointResult, Direction, Error, ErrorKind, MethodId, MethodSpec, MetricId, MetricSpec, Sample};

/// Status codes. Keep in sync with `include/optcut.h`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptcutStatus {
    Ok = 0,
    NullPointer = 1,
    Usage = 2,
    Data = 3,
    Numeric = 4,
    Io = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

pub const OPTCUT_DIRECTION_AUTO: c_int = 0;
pub const OPTCUT_DIRECTION_GE: c_int = 1;
pub const OPTCUT_DIRECTION_LE: c_int = 2;

pub struct OptcutSample(Sample);

pub struct OptcutResult(CutpointResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(OptcutStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            ErrorKind::Usage => OptcutStatus::Usage,
            ErrorKind::Data => OptcutStatus::Data,
            ErrorKind::Numeric => OptcutStatus::Numeric,
            ErrorKind::Io => OptcutStatus::Io,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(OptcutStatus::NullPointer, format!("{what} is NULL"))
}

/// Run `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OptcutStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OptcutStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OptcutStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(OptcutStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(OptcutStatus::Data, "string contains NUL".into()))
}

fn direction_of(sample: &Sample, code: c_int) -> Result<Direction, Fail> {
    match code {
        OPTCUT_DIRECTION_GE => Ok(Direction::Ge),
        OPTCUT_DIRECTION_LE => Ok(Direction::Le),
        OPTCUT_DIRECTION_AUTO => {
            let pos = optcut::stats::median(&sample.positives());
            let neg = optcut::stats::median(&sample.negatives());
            if pos > neg {
                Ok(Direction::Ge)
            } else if pos < neg {
                Ok(Direction::Le)
            } else {
                Err(Error::AmbiguousDirection.into())
            }
        }
        other => Err(Fail(OptcutStatus::Usage, format!("unknown direction code {other}"))),
    }
}

unsafe fn specs(method: *const c_char, metric: *const c_char) -> Result<(MethodSpec, MetricSpec), Fail> {
    let method = MethodSpec::new(text(method, "method")?.parse::<MethodId>()?);
    let metric = MetricSpec::new(text(metric, "metric")?.parse::<MetricId>()?);
    Ok((method, metric))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn optcut_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Free with
/// `optcut_string_free`.
#[no_mangle]
pub extern "C" fn optcut_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn optcut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build a sample from `n` predictor values and 0/1 labels (non-zero is
/// positive).
///
/// # Safety
/// `x` and `labels` must point to `n` readable elements; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn optcut_sample_new(
    x: *const f64,
    labels: *const u8,
    n: usize,
    out: *mut *mut OptcutSample,
) -> OptcutStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if x.is_null() || labels.is_null() {
            return Err(null(if x.is_null() { "x" } else { "labels" }));
        }
        let xs = std::slice::from_raw_parts(x, n).to_vec();
        let ls = std::slice::from_raw_parts(labels, n).iter().map(|&l| l != 0).collect();
        let sample = Sample::new(xs, ls)?;
        *out = Box::into_raw(Box::new(OptcutSample(sample)));
        Ok(())
    })
}

/// # Safety
/// `sample` must come from `optcut_sample_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn optcut_sample_free(sample: *mut OptcutSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Estimate a cutpoint. `method` and `metric` are identifiers such as
/// "empirical" and "youden"; `direction` is one of the direction codes.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn optcut_estimate(
    sample: *const OptcutSample,
    direction: c_int,
    method: *const c_char,
    metric: *const c_char,
    seed: u64,
    out: *mut *mut OptcutResult,
) -> OptcutStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let sample = &sample.as_ref().ok_or_else(|| null("sample"))?.0;
        let (method, metric) = specs(method, metric)?;
        let dir = direction_of(sample, direction)?;
        let curve = build_roc(sample, dir);
        let result = estimate(sample, &curve, &method, &metric, seed)?.with_classes("1", "0");
        *out = Box::into_raw(Box::new(OptcutResult(result)));
        Ok(())
    })
}

/// # Safety
/// `result` must come from `optcut_estimate` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn optcut_result_free(result: *mut OptcutResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Optimal cutpoint; NaN for a NULL handle.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optcut_result_cutpoint(result: *const OptcutResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.optimal_cutpoint)
}

/// Metric value at the cutpoint; NaN for a NULL handle.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optcut_result_metric_value(result: *const OptcutResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.method_metric_value)
}

/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optcut_result_auc(result: *const OptcutResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.auc)
}

/// Confusion counts at the cutpoint.
///
/// # Safety
/// `result` must be a live handle and every output pointer writable.
#[no_mangle]
pub unsafe extern "C" fn optcut_result_counts(
    result: *const OptcutResult,
    tp: *mut u64,
    fp: *mut u64,
    tn: *mut u64,
    fn_: *mut u64,
) -> OptcutStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        if tp.is_null() || fp.is_null() || tn.is_null() || fn_.is_null() {
            return Err(null("count output"));
        }
        *tp = r.panel.tp;
        *fp = r.panel.fp;
        *tn = r.panel.tn;
        *fn_ = r.panel.fn_;
        Ok(())
    })
}

/// The full result as JSON. Free with `optcut_string_free`.
///
/// # Safety
/// `result` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn optcut_result_to_json(result: *const OptcutResult, out: *mut *mut c_char) -> OptcutStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        let json = serde_json::to_string(r).map_err(|e| Fail(OptcutStatus::Io, e.to_string()))?;
        *out = into_c_string(json)?;
        Ok(())
    })
}

/// Bootstrap validation; writes the summary table as JSON. `workers` of
/// 0 uses the default pool.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn optcut_bootstrap_summary_json(
    sample: *const OptcutSample,
    direction: c_int,
    method: *const c_char,
    metric: *const c_char,
    boot_runs: usize,
    seed: u64,
    workers: usize,
    out: *mut *mut c_char,
) -> OptcutStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let sample = &sample.as_ref().ok_or_else(|| null("sample"))?.0;
        let (method, metric) = specs(method, metric)?;
        let dir = direction_of(sample, direction)?;
        let config = BootConfig {
            boot_runs,
            stratified: false,
            seed,
            workers: (workers > 0).then_some(workers),
        };
        let run = run_bootstrap(sample, dir, &method, &metric, &config)?;
        let json =
            serde_json::to_string(&summarize_bootstrap(&run)).map_err(|e| Fail(OptcutStatus::Io, e.to_string()))?;
        *out = into_c_string(json)?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> *mut OptcutSample {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let l = [0u8, 0, 0, 1, 1, 1];
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { optcut_sample_new(x.as_ptr(), l.as_ptr(), 6, &mut s) }, OptcutStatus::Ok);
        s
    }

    #[test]
    fn estimate_round_trip() {
        let s = sample();
        let mut r = ptr::null_mut();
        let st = unsafe { optcut_estimate(s, OPTCUT_DIRECTION_AUTO, c"empirical".as_ptr(), c"youden".as_ptr(), 1, &mut r) };
        assert_eq!(st, OptcutStatus::Ok);
        assert_eq!(unsafe { optcut_result_cutpoint(r) }, 4.0);
        let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
        unsafe { optcut_result_counts(r, &mut tp, &mut fp, &mut tn, &mut fn_) };
        assert_eq!((tp, fp, tn, fn_), (3, 0, 3, 0));
        unsafe {
            optcut_result_free(r);
            optcut_sample_free(s);
        }
    }

    #[test]
    fn errors_are_reported() {
        let x = [1.0, 2.0];
        let l = [1u8, 1];
        let mut s = ptr::null_mut();
        let st = unsafe { optcut_sample_new(x.as_ptr(), l.as_ptr(), 2, &mut s) };
        assert_eq!(st, OptcutStatus::Data);
        assert!(s.is_null());
        let msg = optcut_last_error();
        assert!(!msg.is_null());
        unsafe { optcut_string_free(msg) };

        let s = sample();
        let mut r = ptr::null_mut();
        let st = unsafe { optcut_estimate(s, 9, c"empirical".as_ptr(), c"youden".as_ptr(), 1, &mut r) };
        assert_eq!(st, OptcutStatus::Usage);
        let st = unsafe { optcut_estimate(s, 1, c"nope".as_ptr(), c"youden".as_ptr(), 1, &mut r) };
        assert_eq!(st, OptcutStatus::Usage);
        let st = unsafe { optcut_estimate(ptr::null(), 1, c"empirical".as_ptr(), c"youden".as_ptr(), 1, &mut r) };
        assert_eq!(st, OptcutStatus::NullPointer);
        unsafe { optcut_sample_free(s) };
    }
}
