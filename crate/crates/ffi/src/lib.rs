//! C ABI over `latticek`.
//!
//! Every fallible call returns an [`LkStatus`]; results go through out
//! pointers, and the message of the last failure on the calling thread is
//! available from [`lk_last_error`]. Handles are opaque and released with
//! their `_free` function. Strings returned as `char *` are owned by the
//! caller and released with [`lk_string_free`]; `const char *` results are
//! borrowed from their handle.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use latticek::lattice::{lattice_direct, lattice_mellin_est, LatticeSumSpec};
use latticek::lseries::{lvalue, CharacterId};
use latticek::quadrature::{k_integral, KIntegralSpec};
use latticek::registry::{self, IdentityRecord, VerificationReport};
use latticek::specfun::{ellint_e, ellint_k, gamma_fn};
use latticek::symbolic::compute_pn;
use latticek::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    Domain = 3,
    Pole = 4,
    NoConvergence = 5,
    NotIntegrable = 6,
    Unsupported = 7,
    Parse = 8,
    Schema = 9,
    DuplicateId = 10,
    Io = 11,
    OutOfRange = 12,
    /// Any other library error; see [`lk_last_error`].
    Numeric = 13,
    Panic = 14,
}

/// A loaded registry: bundled or file records plus the generated ones.
pub struct LkRegistry {
    records: Vec<IdentityRecord>,
    ids: Vec<CString>,
}

/// The result of a verification run.
pub struct LkReport {
    report: VerificationReport,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LkSummary {
    pub records: usize,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LkStatus {
    match e {
        Error::Domain(_) => LkStatus::Domain,
        Error::Pole(_) | Error::NonCancelling(_) => LkStatus::Pole,
        Error::NoConvergence { .. } | Error::Divergence(_) => LkStatus::NoConvergence,
        Error::Integrability(_) => LkStatus::NotIntegrable,
        Error::Unsupported(_) | Error::DimensionTooLarge(_) => LkStatus::Unsupported,
        Error::Parse(_) => LkStatus::Parse,
        Error::Schema { .. } => LkStatus::Schema,
        Error::DuplicateId(_) => LkStatus::DuplicateId,
        Error::Io(_) => LkStatus::Io,
        _ => LkStatus::Numeric,
    }
}

/// Runs `f`, recording failures (and panics) for `lk_last_error`.
fn guard(f: impl FnOnce() -> Result<(), LkStatus>) -> LkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LkStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            LkStatus::Panic
        }
    }
}

fn lib<T>(r: latticek::Result<T>) -> Result<T, LkStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

fn fail<T>(status: LkStatus, msg: &str) -> Result<T, LkStatus> {
    set_error(msg);
    Err(status)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, LkStatus> {
    match p.as_mut() {
        Some(r) => Ok(r),
        None => fail(LkStatus::NullPointer, "null output pointer"),
    }
}

unsafe fn string<'a>(p: *const c_char) -> Result<&'a str, LkStatus> {
    if p.is_null() {
        return fail(LkStatus::NullPointer, "null string");
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(_) => fail(LkStatus::InvalidString, "string is not UTF-8"),
    }
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// The library version; static storage.
#[no_mangle]
pub extern "C" fn lk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread (empty if none). Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn lk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// K(k) for 0 <= k < 1.
#[no_mangle]
pub unsafe extern "C" fn lk_ellint_k(k: f64, value: *mut f64) -> LkStatus {
    guard(|| {
        *out(value)? = lib(ellint_k(k))?;
        Ok(())
    })
}

/// E(k) for 0 <= k <= 1.
#[no_mangle]
pub unsafe extern "C" fn lk_ellint_e(k: f64, value: *mut f64) -> LkStatus {
    guard(|| {
        *out(value)? = lib(ellint_e(k))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lk_gamma(x: f64, value: *mut f64) -> LkStatus {
    guard(|| {
        *out(value)? = lib(gamma_fn(x))?;
        Ok(())
    })
}

/// L(s) for a character label: ZETA, ETA, LAMBDA, BETA, L-3, L-8, L8, L12,
/// L-24 or L24.
#[no_mangle]
pub unsafe extern "C" fn lk_lvalue(label: *const c_char, s: f64, value: *mut f64) -> LkStatus {
    guard(|| {
        let label = string(label)?;
        let Some(id) = CharacterId::parse(label) else {
            return fail(LkStatus::Domain, &format!("unknown character {label}"));
        };
        *out(value)? = lib(lvalue(id, s))?;
        Ok(())
    })
}

/// `int_0^1 poly(k) k^alpha k'^beta K^gamma K'^delta dk`. `poly` holds
/// `poly_len` coefficients, lowest degree first; null or empty means 1.
/// `error_estimate` may be null.
#[no_mangle]
pub unsafe extern "C" fn lk_k_integral(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    poly: *const f64,
    poly_len: usize,
    tol: f64,
    value: *mut f64,
    error_estimate: *mut f64,
) -> LkStatus {
    guard(|| {
        let value = out(value)?;
        let mut spec = KIntegralSpec::monomial(alpha, beta, gamma, delta);
        if !poly.is_null() && poly_len > 0 {
            spec = spec.with_poly(std::slice::from_raw_parts(poly, poly_len).to_vec());
        }
        let r = lib(k_integral(&spec, tol))?;
        *value = r.value;
        if let Some(e) = error_estimate.as_mut() {
            *e = r.error_estimate;
        }
        Ok(())
    })
}

/// L(m, n, p; s) through its K integral.
#[no_mangle]
pub unsafe extern "C" fn lk_lattice_mellin(m: f64, n: f64, p: f64, s: f64, value: *mut f64) -> LkStatus {
    guard(|| {
        let value = out(value)?;
        let spec = lib(LatticeSumSpec::new(m, n, p, s))?;
        *value = lib(lattice_mellin_est(&spec, 1e-12))?.value;
        Ok(())
    })
}

/// L(m, n, p; s) by direct summation over a ball of the given radius.
#[no_mangle]
pub unsafe extern "C" fn lk_lattice_direct(
    m: f64,
    n: f64,
    p: f64,
    s: f64,
    radius: usize,
    value: *mut f64,
    error_estimate: *mut f64,
) -> LkStatus {
    guard(|| {
        let value = out(value)?;
        let spec = lib(LatticeSumSpec::new(m, n, p, s))?;
        let (v, e) = lib(lattice_direct(&spec, radius))?;
        *value = v;
        if let Some(p) = error_estimate.as_mut() {
            *p = e;
        }
        Ok(())
    })
}

/// The polynomial p_n(k) of the even-power family, as text, with the
/// rational constant of its closed form. Both strings are caller-owned.
#[no_mangle]
pub unsafe extern "C" fn lk_even_power_polynomial(n: usize, poly: *mut *mut c_char, constant: *mut *mut c_char) -> LkStatus {
    guard(|| {
        let (poly, constant) = (out(poly)?, out(constant)?);
        let r = lib(compute_pn(n))?;
        *poly = owned(r.p_n.display_in("k"));
        *constant = owned(r.constant.to_string());
        Ok(())
    })
}

fn registry_handle(records: Vec<IdentityRecord>) -> Box<LkRegistry> {
    let ids = records.iter().map(|r| CString::new(r.id.as_str()).unwrap_or_default()).collect();
    Box::new(LkRegistry { records, ids })
}

/// The bundled registry.
#[no_mangle]
pub unsafe extern "C" fn lk_registry_bundled(registry: *mut *mut LkRegistry) -> LkStatus {
    guard(|| {
        let registry = out(registry)?;
        *registry = Box::into_raw(registry_handle(lib(registry::bundled_registry())?));
        Ok(())
    })
}

/// A registry file (plus the generated records).
#[no_mangle]
pub unsafe extern "C" fn lk_registry_load(path: *const c_char, registry: *mut *mut LkRegistry) -> LkStatus {
    guard(|| {
        let registry = out(registry)?;
        let path = string(path)?;
        *registry = Box::into_raw(registry_handle(lib(registry::registry_with_generated(path))?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lk_registry_len(registry: *const LkRegistry) -> usize {
    registry.as_ref().map_or(0, |r| r.records.len())
}

/// Id of record `index`, borrowed from the handle; null when out of range.
#[no_mangle]
pub unsafe extern "C" fn lk_registry_id(registry: *const LkRegistry, index: usize) -> *const c_char {
    registry.as_ref().and_then(|r| r.ids.get(index)).map_or(ptr::null(), |s| s.as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn lk_registry_free(registry: *mut LkRegistry) {
    if !registry.is_null() {
        drop(Box::from_raw(registry));
    }
}

/// Verifies the records matching `filter` (null or "" for all) with up to
/// `threads` workers (0: default).
#[no_mangle]
pub unsafe extern "C" fn lk_registry_verify(
    registry: *const LkRegistry,
    filter: *const c_char,
    threads: usize,
    report: *mut *mut LkReport,
) -> LkStatus {
    guard(|| {
        let report = out(report)?;
        let Some(reg) = registry.as_ref() else {
            return fail(LkStatus::NullPointer, "null registry");
        };
        let filter = if filter.is_null() { "" } else { string(filter)? };
        let threads = (threads > 0).then_some(threads);
        let r = lib(registry::run_suite(&reg.records, filter, threads))?;
        *report = Box::into_raw(Box::new(LkReport { report: r }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lk_report_summary(report: *const LkReport, summary: *mut LkSummary) -> LkStatus {
    guard(|| {
        let summary = out(summary)?;
        let Some(r) = report.as_ref() else {
            return fail(LkStatus::NullPointer, "null report");
        };
        let s = &r.report.summary;
        *summary = LkSummary { records: s.records, rows: s.rows, passed: s.passed, failed: s.failed, skipped: s.skipped };
        Ok(())
    })
}

/// The report as JSON (`markdown` nonzero: as a markdown table); caller-owned.
#[no_mangle]
pub unsafe extern "C" fn lk_report_render(report: *const LkReport, markdown: i32, text: *mut *mut c_char) -> LkStatus {
    guard(|| {
        let text = out(text)?;
        let Some(r) = report.as_ref() else {
            return fail(LkStatus::NullPointer, "null report");
        };
        *text = owned(if markdown != 0 { r.report.to_markdown() } else { r.report.to_json() });
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lk_report_free(report: *mut LkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Record `index` in its registry JSON form; caller-owned.
#[no_mangle]
pub unsafe extern "C" fn lk_registry_record_json(registry: *const LkRegistry, index: usize, text: *mut *mut c_char) -> LkStatus {
    guard(|| {
        let text = out(text)?;
        let Some(reg) = registry.as_ref() else {
            return fail(LkStatus::NullPointer, "null registry");
        };
        let Some(r) = reg.records.get(index) else {
            return fail(LkStatus::OutOfRange, &format!("index {index} of {}", reg.records.len()));
        };
        *text = owned(serde_json::to_string_pretty(r).map_err(|e| {
            set_error(&e.to_string());
            LkStatus::Numeric
        })?);
        Ok(())
    })
}
