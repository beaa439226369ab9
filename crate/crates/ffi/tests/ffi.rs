use std::ffi::{c_char, CStr};
use std::ptr;

use fermat_ns_ffi::*;

fn last_error() -> String {
    let p = fns_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    fns_string_free(p);
    s
}

#[test]
fn invariants_and_cover() {
    let mut inv = FnsInvariants::default();
    assert_eq!(unsafe { fns_surface_invariants(7, &mut inv) }, FnsStatus::Ok);
    assert_eq!((inv.rho, inv.b2), (91, 187));
    assert!(fns_last_error().is_null());

    let mut cover = FnsCover::default();
    assert_eq!(unsafe { fns_find_cover(89, &mut cover) }, FnsStatus::Ok);
    assert_eq!((cover.r, cover.q), (16, 1423));
}

#[test]
fn errors_are_reported() {
    assert_eq!(unsafe { fns_surface_invariants(7, ptr::null_mut()) }, FnsStatus::NullPointer);
    assert_eq!(last_error(), "null pointer argument");

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fns_gram_rational(6, &mut g) }, FnsStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    let mut c = ptr::null_mut();
    assert_eq!(unsafe { fns_reproduce_table_row(6, 0, &mut c) }, FnsStatus::NotFound);
    assert_eq!(unsafe { fns_certify_discriminant(6, &mut c) }, FnsStatus::InvalidArgument);
    unsafe {
        fns_gram_free(ptr::null_mut());
        fns_certificate_free(ptr::null_mut());
        fns_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { fns_gram_dim(ptr::null()) }, 0);
}

#[test]
fn gram_handle() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fns_gram_rational(5, &mut g) }, FnsStatus::Ok);
    assert_eq!(unsafe { fns_gram_dim(g) }, 37);
    let mut v = 0i64;
    assert_eq!(unsafe { fns_gram_get(g, 0, 0, &mut v) }, FnsStatus::Ok);
    assert_eq!(v, -3);
    assert_eq!(unsafe { fns_gram_get(g, 37, 0, &mut v) }, FnsStatus::InvalidArgument);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fns_gram_discriminant(g, &mut s) }, FnsStatus::Ok);
    assert_eq!(unsafe { take_string(s) }, "244140625");
    unsafe { fns_gram_free(g) };
}

#[test]
fn certificates() {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { fns_certify_discriminant(5, &mut c) }, FnsStatus::Ok);
    let mut v = FnsVerdict::Failed;
    assert_eq!(unsafe { fns_certificate_verdict(c, &mut v) }, FnsStatus::Ok);
    assert_eq!(v, FnsVerdict::Generated);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fns_certificate_json(c, &mut s) }, FnsStatus::Ok);
    let json = unsafe { take_string(s) };
    assert!(json.starts_with("{\n  \"schema_version\": 1,\n  \"m\": 5,"));
    assert!(json.contains("\"value\": \"65536\""));
    unsafe { fns_certificate_free(c) };

    let mut c = ptr::null_mut();
    assert_eq!(unsafe { fns_reproduce_table_row(7, 1, &mut c) }, FnsStatus::Ok);
    assert_eq!(unsafe { fns_certificate_verdict(c, &mut v) }, FnsStatus::Ok);
    assert_eq!(v, FnsVerdict::Generated);
    unsafe { fns_certificate_free(c) };
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(fns_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fermat_ns.h")).unwrap();
    for name in ["fns_last_error", "fns_gram_rational", "fns_certificate_json", "FnsStatus", "FnsCertificate"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
