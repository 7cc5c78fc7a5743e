use std::ffi::{CStr, CString};
use std::ptr;

use nilcontact_ffi::*;

fn json(r: *const NcReport) -> serde_json::Value {
    let s = unsafe { CStr::from_ptr(nc_report_json(r)) };
    serde_json::from_str(s.to_str().unwrap()).unwrap()
}

#[test]
fn version() {
    let v = unsafe { CStr::from_ptr(nc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn parse_and_check() {
    let src = CString::new("dim 3\n[e1,e2] = e3\n").unwrap();
    let name = CString::new("h3").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(nc_entry_parse(src.as_ptr(), name.as_ptr(), &mut e), NcStatus::Ok);
        assert_eq!(nc_entry_dim(e), 3);
        let mut r = ptr::null_mut();
        assert_eq!(nc_check(e, NcSuite::Jacobi, 5, &mut r), NcStatus::Ok);
        assert!(nc_report_ok(r));
        assert_eq!(nc_report_count(r, 1), 0);
        assert_eq!(json(r)["seed"], 5);
        nc_report_free(r);
        nc_entry_free(e);
    }
}

#[test]
fn parse_error() {
    let src = CString::new("dim 3\n[e1,e9] = e3\n").unwrap();
    let name = CString::new("bad").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(nc_entry_parse(src.as_ptr(), name.as_ptr(), &mut e), NcStatus::Parse);
        assert!(e.is_null());
        let msg = CStr::from_ptr(nc_last_error()).to_str().unwrap();
        assert!(msg.contains("line 2"), "{msg}");
    }
}

#[test]
fn fixtures_fail() {
    let key = CString::new("broken_jacobi").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(nc_entry_from_key(key.as_ptr(), &mut e), NcStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(nc_check(e, NcSuite::All, 0, &mut r), NcStatus::Ok);
        assert!(!nc_report_ok(r));
        assert!(nc_report_count(r, 1) >= 1);
        assert_eq!(nc_report_count(r, -1), nc_report_count(r, 0) + nc_report_count(r, 1) + nc_report_count(r, 2) + nc_report_count(r, 3));
        nc_report_free(r);
        nc_entry_free(e);
    }
}

#[test]
fn reproduce() {
    let t = CString::new("3.2").unwrap();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(nc_reproduce(t.as_ptr(), 0, &mut r), NcStatus::Ok);
        assert!(nc_report_ok(r));
        let doc = json(r);
        assert_eq!(doc["theorem"]["total"], 25);
        assert_eq!(doc["theorem"]["confirmed"], 25);
        nc_report_free(r);
        let bad = CString::new("4.0").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(nc_reproduce(bad.as_ptr(), 0, &mut r), NcStatus::InvalidArgument);
        assert!(r.is_null());
    }
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        assert_eq!(nc_entry_dim(ptr::null()), 0);
        assert!(!nc_report_ok(ptr::null()));
        assert!(nc_report_json(ptr::null()).is_null());
        nc_entry_free(ptr::null_mut());
        nc_report_free(ptr::null_mut());
        let mut r = ptr::null_mut();
        assert_eq!(nc_check(ptr::null(), NcSuite::All, 0, &mut r), NcStatus::NullPointer);
    }
}
