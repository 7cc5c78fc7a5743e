//! C interface to the nilcontact checks.
//!
//! Entries and reports are opaque handles owned by the caller and released
//! with the matching `*_free`. Every fallible call returns an [`NcStatus`];
//! on failure [`nc_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilcontact::catalog::report::{to_json, Counts};
use nilcontact::catalog::{
    self, checks::run_catalog, parse_algebra, reproduce_theorem, CatalogEntry, CatalogError, Status, Suite, Theorem,
    TheoremSummary, VerificationReport,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownKey = 4,
    Io = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcSuite {
    All = 0,
    Jacobi = 1,
    Contact = 2,
    Kahler = 3,
    Curvature = 4,
    Ricci = 5,
}

impl From<NcSuite> for Suite {
    fn from(s: NcSuite) -> Self {
        match s {
            NcSuite::All => Suite::All,
            NcSuite::Jacobi => Suite::Jacobi,
            NcSuite::Contact => Suite::Contact,
            NcSuite::Kahler => Suite::Kahler,
            NcSuite::Curvature => Suite::Curvature,
            NcSuite::Ricci => Suite::Ricci,
        }
    }
}

/// Opaque catalog entry.
pub struct NcEntry(CatalogEntry);

/// Opaque result of a verification run.
pub struct NcReport {
    reports: Vec<VerificationReport>,
    theorem: Option<TheoremSummary>,
    json: CString,
}

impl NcReport {
    fn new(command: &str, seed: u64, reports: Vec<VerificationReport>, theorem: Option<TheoremSummary>) -> Self {
        let json = to_json(command, seed, &reports, theorem.as_ref());
        // serde_json escapes control characters, so no interior NUL
        let json = CString::new(json).unwrap_or_default();
        NcReport { reports, theorem, json }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: NcStatus, msg: impl Into<String>) -> NcStatus {
    set_error(msg);
    status
}

fn catalog_status(e: &CatalogError) -> NcStatus {
    match e {
        CatalogError::Parse { .. } => NcStatus::Parse,
        CatalogError::Io(..) => NcStatus::Io,
        CatalogError::DuplicateKey(_) => NcStatus::InvalidArgument,
        CatalogError::UnknownKey(_) => NcStatus::UnknownKey,
    }
}

fn guard(f: impl FnOnce() -> NcStatus) -> NcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail(NcStatus::Panic, msg)
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, NcStatus> {
    if p.is_null() {
        return Err(fail(NcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(NcStatus::InvalidUtf8, e.to_string()))
}

fn store<T>(out: *mut *mut T, value: T) -> NcStatus {
    unsafe { *out = Box::into_raw(Box::new(value)) };
    NcStatus::Ok
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn nc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Looks `key` up in the catalog (honoring `NILCONTACT_CATALOG`), then in the
/// negative-control fixtures.
///
/// # Safety
/// `key` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_entry_from_key(key: *const c_char, out: *mut *mut NcEntry) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return fail(NcStatus::NullPointer, "null out pointer");
        }
        let key = match text(key) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let cat = match catalog::load_catalog() {
            Ok(c) => c,
            Err(e) => return fail(catalog_status(&e), e.to_string()),
        };
        if let Ok(e) = catalog::find(&cat, key) {
            return store(out, NcEntry(e.clone()));
        }
        match catalog::find(&catalog::fixtures(), key) {
            Ok(e) => store(out, NcEntry(e.clone())),
            Err(e) => fail(catalog_status(&e), e.to_string()),
        }
    })
}

/// Parses an algebra document.
///
/// # Safety
/// `source` and `name` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_entry_parse(
    source: *const c_char,
    name: *const c_char,
    out: *mut *mut NcEntry,
) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return fail(NcStatus::NullPointer, "null out pointer");
        }
        let (source, name) = match (text(source), text(name)) {
            (Ok(s), Ok(n)) => (s, n),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match parse_algebra(source, name) {
            Ok(e) => store(out, NcEntry(e)),
            Err(e) => fail(NcStatus::Parse, format!("{name}: {e}")),
        }
    })
}

/// # Safety
/// `entry` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nc_entry_free(entry: *mut NcEntry) {
    if !entry.is_null() {
        drop(Box::from_raw(entry));
    }
}

/// Dimension of the entry's algebra, 0 for a null handle.
///
/// # Safety
/// `entry` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_entry_dim(entry: *const NcEntry) -> usize {
    entry.as_ref().map_or(0, |e| e.0.dim())
}

/// Runs one suite of checks on an entry.
///
/// # Safety
/// `entry` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_check(entry: *const NcEntry, suite: NcSuite, seed: u64, out: *mut *mut NcReport) -> NcStatus {
    guard(|| {
        let Some(entry) = entry.as_ref() else {
            return fail(NcStatus::NullPointer, "null entry");
        };
        if out.is_null() {
            return fail(NcStatus::NullPointer, "null out pointer");
        }
        let reports = run_catalog(std::slice::from_ref(&entry.0), suite.into(), seed, false);
        store(out, NcReport::new(&format!("check {}", entry.0.key), seed, reports, None))
    })
}

/// Reproduces a theorem table ("3.1" or "3.2").
///
/// # Safety
/// `theorem` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_reproduce(theorem: *const c_char, seed: u64, out: *mut *mut NcReport) -> NcStatus {
    guard(|| {
        if out.is_null() {
            return fail(NcStatus::NullPointer, "null out pointer");
        }
        let name = match text(theorem) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(t) = Theorem::parse(name) else {
            return fail(NcStatus::InvalidArgument, format!("unknown theorem '{name}'"));
        };
        let cat = match catalog::load_catalog() {
            Ok(c) => c,
            Err(e) => return fail(catalog_status(&e), e.to_string()),
        };
        let s = reproduce_theorem(&cat, t, seed, false);
        let reports = s.reports.clone();
        store(out, NcReport::new(&format!("reproduce --theorem {t}"), seed, reports, Some(s)))
    })
}

/// Number of checks in the report carrying `status` (0 pass, 1 fail, 2 skip,
/// 3 info); any other value counts every check.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_report_count(report: *const NcReport, status: i32) -> usize {
    let Some(r) = report.as_ref() else { return 0 };
    let c = Counts::of(&r.reports);
    match status {
        0 => c.pass,
        1 => c.fail,
        2 => c.skip,
        3 => c.info,
        _ => c.checks,
    }
}

/// True when no check failed and, for a reproduction, every entry confirmed.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_report_ok(report: *const NcReport) -> bool {
    report.as_ref().is_some_and(|r| {
        r.reports.iter().all(|x| x.status != Status::Fail) && r.theorem.as_ref().is_none_or(|t| t.all_confirmed())
    })
}

/// The JSON report document, owned by the handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_report_json(report: *const NcReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nc_report_free(report: *mut NcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_roundtrip() {
        let mut e = ptr::null_mut();
        let key = CString::new("g24_1").unwrap();
        unsafe {
            assert_eq!(nc_entry_from_key(key.as_ptr(), &mut e), NcStatus::Ok);
            assert_eq!(nc_entry_dim(e), 7);
            let mut r = ptr::null_mut();
            assert_eq!(nc_check(e, NcSuite::Jacobi, 0, &mut r), NcStatus::Ok);
            assert!(nc_report_ok(r));
            assert!(nc_report_count(r, 0) >= 1);
            nc_report_free(r);
            nc_entry_free(e);
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut e = ptr::null_mut();
        let key = CString::new("nope").unwrap();
        unsafe {
            assert_eq!(nc_entry_from_key(key.as_ptr(), &mut e), NcStatus::UnknownKey);
            assert!(e.is_null());
            assert!(CStr::from_ptr(nc_last_error()).to_str().unwrap().contains("nope"));
            assert_eq!(nc_entry_from_key(ptr::null(), &mut e), NcStatus::NullPointer);
        }
    }
}
