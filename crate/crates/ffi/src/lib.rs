//! C interface to `fermat-ns`.
//!
//! Every fallible function returns an [`FnsStatus`]; on failure a message is
//! available from [`fns_last_error`] on the same thread. Objects are passed
//! as opaque handles and released with the matching `*_free` function.
//! Strings returned through out-parameters are owned by the caller and
//! released with [`fns_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fermat_ns::certify::{certify_discriminant, reproduce_table_row_with, Certificate, Table, Verdict};
use fermat_ns::char_p_divisors::find_cover_params;
use fermat_ns::exact_linalg::{det_exact, IntMatrix};
use fermat_ns::fermat_combinatorics::surface_invariants;
use fermat_ns::line_lattice::{gram_matrix, rational_basis};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotFound = 3,
    ComputationFailed = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnsVerdict {
    Generated = 0,
    Inconclusive = 1,
    Failed = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FnsInvariants {
    pub m: u64,
    pub b2: i64,
    pub pg: i64,
    pub rho: i64,
    pub lambda: i64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FnsCover {
    pub m: u64,
    pub r: u64,
    pub q: u64,
    pub p: u64,
    pub n: u32,
}

/// Gram matrix of a line basis.
pub struct FnsGram(IntMatrix);

/// Result of a certification run.
pub struct FnsCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn guard(f: impl FnOnce() -> Result<(), (FnsStatus, String)>) -> FnsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FnsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FnsStatus::Panic
        }
    }
}

fn failed(e: impl std::fmt::Display) -> (FnsStatus, String) {
    (FnsStatus::ComputationFailed, e.to_string())
}

fn invalid(e: impl std::fmt::Display) -> (FnsStatus, String) {
    (FnsStatus::InvalidArgument, e.to_string())
}

fn null() -> (FnsStatus, String) {
    (FnsStatus::NullPointer, "null pointer argument".into())
}

fn string_out(s: String, out: *mut *mut c_char) -> Result<(), (FnsStatus, String)> {
    let c = CString::new(s).map_err(failed)?;
    // SAFETY: caller checked `out` is non-null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fns_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn fns_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_surface_invariants(m: u64, out: *mut FnsInvariants) -> FnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let inv = surface_invariants(m).map_err(invalid)?;
        *out = FnsInvariants {
            m: inv.m,
            b2: inv.b2,
            pg: inv.pg,
            rho: inv.rho,
            lambda: inv.lambda,
        };
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_find_cover(m: u64, out: *mut FnsCover) -> FnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let c = find_cover_params(m).map_err(invalid)?;
        *out = FnsCover {
            m: c.m,
            r: c.r,
            q: c.q,
            p: c.p,
            n: c.n,
        };
        Ok(())
    })
}

/// Gram matrix of the rational line basis of degree `m`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_gram_rational(m: u64, out: *mut *mut FnsGram) -> FnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let basis = rational_basis(m).map_err(invalid)?;
        let g = gram_matrix(&basis, m).map_err(failed)?;
        *out = Box::into_raw(Box::new(FnsGram(g)));
        Ok(())
    })
}

/// Number of rows; 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fns_gram_dim(g: *const FnsGram) -> usize {
    g.as_ref().map_or(0, |g| g.0.rows())
}

/// # Safety
/// `g` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_gram_get(g: *const FnsGram, i: usize, j: usize, out: *mut i64) -> FnsStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        if i >= g.0.rows() || j >= g.0.cols() {
            return Err(invalid(format!("index ({i}, {j}) out of range")));
        }
        *out = g.0.get(i, j);
        Ok(())
    })
}

/// Exact determinant as a decimal string.
///
/// # Safety
/// `g` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_gram_discriminant(g: *const FnsGram, out: *mut *mut c_char) -> FnsStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let d = det_exact(&g.0).map_err(failed)?;
        string_out(d.to_string(), out)
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fns_gram_free(g: *mut FnsGram) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Discriminant-mode certification for `m` in {4, 5, 7, 11, 13}.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_certify_discriminant(m: u64, out: *mut *mut FnsCertificate) -> FnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cert = certify_discriminant(m).map_err(|e| match e {
            fermat_ns::certify::CertifyError::UnsupportedDegree(_) => invalid(e),
            _ => failed(e),
        })?;
        *out = Box::into_raw(Box::new(FnsCertificate(cert)));
        Ok(())
    })
}

/// Duality-mode certification pinned to the bundled table.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_reproduce_table_row(m: u64, seed: u64, out: *mut *mut FnsCertificate) -> FnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cert = reproduce_table_row_with(&Table::shipped(), m, seed).map_err(|e| match e {
            fermat_ns::certify::CertifyError::RowNotFound(_) => (FnsStatus::NotFound, e.to_string()),
            _ => failed(e),
        })?;
        *out = Box::into_raw(Box::new(FnsCertificate(cert)));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_certificate_verdict(c: *const FnsCertificate, out: *mut FnsVerdict) -> FnsStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        *out = match c.0.verdict {
            Verdict::Generated => FnsVerdict::Generated,
            Verdict::Inconclusive => FnsVerdict::Inconclusive,
            Verdict::Failed => FnsVerdict::Failed,
        };
        Ok(())
    })
}

/// The certificate as JSON.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fns_certificate_json(c: *const FnsCertificate, out: *mut *mut c_char) -> FnsStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        string_out(c.0.to_json(), out)
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fns_certificate_free(c: *mut FnsCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
