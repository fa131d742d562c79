//! C ABI for `dmod-cohom`.
//!
//! Conventions:
//! - every fallible function returns a [`DmodStatus`]; `DMOD_STATUS_OK` is 0;
//! - results come back through out-pointers; objects are opaque handles
//!   released with their `_free` function, strings with [`dmod_string_free`];
//! - on failure [`dmod_last_error_message`] describes the error (per thread);
//! - panics never cross the boundary; they surface as `DMOD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dmod_cohom::cli::{module_spec, Kind};
use dmod_cohom::derham::derham_stabilized;
use dmod_cohom::exactalg::TruncatedSeries;
use dmod_cohom::parse::{infer_n_vars, parse_op, parse_poly};
use dmod_cohom::seriesdecomp::{decompose, RegularOperator};
use dmod_cohom::structure::catalog::catalog_profile;
use dmod_cohom::structure::{predict, BettiProfile, StructureReport};
use dmod_cohom::Error;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DmodStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    NotRegular = 5,
    Unsupported = 6,
    OutOfRange = 7,
    NotStabilized = 8,
    Internal = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Module kinds accepted by [`dmod_derham`].
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DmodModuleKind {
    PolynomialRing = 0,
    InjectiveHull = 1,
    Localization = 2,
    LocalizationQuotient = 3,
    RankOne = 4,
}

/// Opaque Betti profile.
pub struct DmodProfile(BettiProfile);

/// Opaque structure report.
pub struct DmodReport(StructureReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DmodStatus {
    match e {
        Error::Parse { .. } => DmodStatus::Parse,
        Error::NotRegular(_) => DmodStatus::NotRegular,
        Error::Unsupported(_) => DmodStatus::Unsupported,
        Error::Range { .. } | Error::VariableIndex { .. } => DmodStatus::OutOfRange,
        Error::InternalConsistency(_) => DmodStatus::Internal,
        _ => DmodStatus::InvalidInput,
    }
}

struct Failure(DmodStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic for [`dmod_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DmodStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DmodStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside dmod".into());
            DmodStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(DmodStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(DmodStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn non_null<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(DmodStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NUL bytes").into_raw()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report types serialize")
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library on this thread; do not free.
#[no_mangle]
pub extern "C" fn dmod_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dmod_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dmod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a Betti profile `b_0 .. b_{2d}` (`len = 2d + 1`) of a
/// `d`-dimensional subvariety of `P^n`.
///
/// # Safety
/// `betti` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_profile_new(n: usize, d: usize, betti: *const usize, len: usize, out: *mut *mut DmodProfile) -> DmodStatus {
    guard(|| {
        non_null(out, "out")?;
        if betti.is_null() && len > 0 {
            return Err(Failure(DmodStatus::NullPointer, "betti is NULL".into()));
        }
        let values = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(betti, len).to_vec() };
        let profile = BettiProfile::new(n, d, values)?;
        *out = Box::into_raw(Box::new(DmodProfile(profile)));
        Ok(())
    })
}

/// Looks up a named catalog profile such as `"elliptic-p2"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_profile_from_catalog(name: *const c_char, out: *mut *mut DmodProfile) -> DmodStatus {
    guard(|| {
        non_null(out, "out")?;
        let entry = catalog_profile(text(name, "name")?)?;
        *out = Box::into_raw(Box::new(DmodProfile(entry.profile)));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dmod_profile_free(p: *mut DmodProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Structure report for a profile.
///
/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_predict(profile: *const DmodProfile, out: *mut *mut DmodReport) -> DmodStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = profile.as_ref().ok_or_else(|| Failure(DmodStatus::NullPointer, "profile is NULL".into()))?;
        *out = Box::into_raw(Box::new(DmodReport(predict(&p.0)?)));
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dmod_report_free(r: *mut DmodReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of copies of `E` in the quotient of the critical local
/// cohomology module (0 when it is simple). Returns 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dmod_report_quotient_e_copies(r: *const DmodReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.composition.quotient_e_copies)
}

/// Copies `dim H^j_DR` of the critical module, `j = 0 .. n+1`, into `buf`.
/// `*len` receives the number of values; if `cap` is too small nothing is
/// copied and `DMOD_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `r` must be a live handle; `buf` must hold `cap` values; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_report_derham_dims(r: *const DmodReport, buf: *mut usize, cap: usize, len: *mut usize) -> DmodStatus {
    guard(|| {
        non_null(len, "len")?;
        let r = r.as_ref().ok_or_else(|| Failure(DmodStatus::NullPointer, "report is NULL".into()))?;
        let dims = &r.0.derham_dims;
        *len = dims.len();
        if cap < dims.len() {
            return Err(Failure(DmodStatus::BufferTooSmall, format!("need {} values, have {cap}", dims.len())));
        }
        non_null(buf, "buf")?;
        ptr::copy_nonoverlapping(dims.as_ptr(), buf, dims.len());
        Ok(())
    })
}

/// The report as JSON; free with [`dmod_string_free`].
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_report_to_json(r: *const DmodReport, out: *mut *mut c_char) -> DmodStatus {
    guard(|| {
        non_null(out, "out")?;
        let r = r.as_ref().ok_or_else(|| Failure(DmodStatus::NullPointer, "report is NULL".into()))?;
        *out = into_c_string(json(&r.0));
        Ok(())
    })
}

/// De Rham cohomology of a module, raising the pole cutoff up to
/// `max_cutoff`. `expr` is `f` for the localization kinds and `p` for
/// rank one, ignored otherwise; `vars = 0` infers it from `expr`.
/// Writes `{"dims": [...], "stabilized": bool, "report": {...}}` to
/// `out_json` and returns `DMOD_STATUS_NOT_STABILIZED` (with the JSON still
/// written) when the cutoffs did not agree.
///
/// # Safety
/// `expr` must be NULL or NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_derham(
    kind: DmodModuleKind,
    expr: *const c_char,
    vars: usize,
    max_cutoff: u32,
    out_json: *mut *mut c_char,
) -> DmodStatus {
    guard(|| {
        non_null(out_json, "out_json")?;
        let expr = if expr.is_null() { None } else { Some(text(expr, "expr")?) };
        let vars = match (vars, expr) {
            (0, Some(e)) => Some(infer_n_vars(e)?.max(1)),
            (0, None) => None,
            (v, _) => Some(v),
        };
        let kind = match kind {
            DmodModuleKind::PolynomialRing => Kind::R,
            DmodModuleKind::InjectiveHull => Kind::E,
            DmodModuleKind::Localization => Kind::Loc,
            DmodModuleKind::LocalizationQuotient => Kind::LocQuot,
            DmodModuleKind::RankOne => Kind::RankOne,
        };
        let spec = module_spec(kind, expr, expr, vars)?;
        let (dims, report) = derham_stabilized(&spec, 1, max_cutoff.max(1), (0, 0))?;
        let stabilized = report.stabilized;
        *out_json = into_c_string(json(&serde_json::json!({ "dims": dims.dims, "stabilized": stabilized, "report": report })));
        if stabilized {
            Ok(())
        } else {
            Err(Failure(DmodStatus::NotStabilized, format!("no agreement up to pole cutoff {max_cutoff}")))
        }
    })
}

/// Decomposes the polynomial `f` against the operator `p` (in `x0.., d0`)
/// modulo `(x1, ..)^precision`; writes the decomposition as JSON.
///
/// # Safety
/// `p` and `f` must be NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmod_decompose(p: *const c_char, f: *const c_char, precision: u32, out_json: *mut *mut c_char) -> DmodStatus {
    guard(|| {
        non_null(out_json, "out_json")?;
        let (p, f) = (text(p, "p")?, text(f, "f")?);
        let n = infer_n_vars(p)?.max(infer_n_vars(f)?).max(1);
        let op = RegularOperator::from_weyl(&parse_op(p, Some(n))?, u32::MAX)?;
        let f = parse_poly(f, Some(n))?;
        let series = TruncatedSeries::from_poly(&f, f.degree().unwrap_or(0) + 1);
        *out_json = into_c_string(json(&decompose(&series, &op, precision)?));
        Ok(())
    })
}
