//! C ABI over `grouplab`.
//!
//! Groups are opaque `GlGroup` handles created by [`gl_group_parse`] and
//! released with [`gl_group_free`]. Every fallible call returns a
//! [`GlStatus`] and writes its result through an out-pointer; on failure
//! [`gl_last_error_message`] describes the error. Strings handed out by the
//! library must be released with [`gl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use grouplab::aut::{automorphisms, DEFAULT_AUT_CAP};
use grouplab::extension::classify;
use grouplab::iso::is_isomorphic;
use grouplab::ok::{scan, ScanOptions};
use grouplab::presentation::{parse_presentation, PresentationError};
use grouplab::verify::{self, SweepOptions};
use grouplab::{Group, GroupError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    OutOfRange = 4,
    CapExceeded = 5,
    Internal = 6,
}

/// Opaque handle to a finite group.
pub struct GlGroup {
    group: Group,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(GlStatus, String);

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        let status = match e {
            GroupError::CapExceeded { .. } | GroupError::BudgetExceeded(_) => GlStatus::CapExceeded,
            _ => GlStatus::OutOfRange,
        };
        Failure(status, e.to_string())
    }
}

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::Semantic(g) => g.into(),
            other => Failure(GlStatus::Parse, other.to_string()),
        }
    }
}

fn null() -> Failure {
    Failure(GlStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error (panic)");
            GlStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(GlStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn group<'a>(g: *const GlGroup) -> Result<&'a Group, Failure> {
    g.as_ref().map(|h| &h.group).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and builds a group from a presentation such as `"Z7 x| Z3 [2]"`.
/// `cap` bounds the group order; 0 means the default.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_group_parse(spec: *const c_char, cap: usize, out: *mut *mut GlGroup) -> GlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cap = if cap == 0 {
            grouplab::group::DEFAULT_ORDER_CAP
        } else {
            cap
        };
        let g = parse_presentation(text(spec)?)?.build(cap)?;
        put(out, Box::into_raw(Box::new(GlGroup { group: g })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from [`gl_group_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gl_group_free(g: *mut GlGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_group_order(g: *const GlGroup, out: *mut usize) -> GlStatus {
    guard(|| put(out, group(g)?.order()))
}

/// Product `a * b` of element indices; index 0 is the identity.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_group_multiply(g: *const GlGroup, a: u32, b: u32, out: *mut u32) -> GlStatus {
    guard(|| {
        let g = group(g)?;
        g.check_element(a)?;
        g.check_element(b)?;
        put(out, g.mul(a, b))
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_group_element_order(g: *const GlGroup, x: u32, out: *mut usize) -> GlStatus {
    guard(|| {
        let g = group(g)?;
        g.check_element(x)?;
        put(out, g.element_order(x))
    })
}

/// Taxonomy label such as `"Dihedral(6)"` or `"Other"`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer. Free the result with
/// [`gl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gl_group_classify(g: *const GlGroup, out: *mut *mut c_char) -> GlStatus {
    guard(|| {
        let label = classify(group(g)?).to_string();
        put(out, owned(label))
    })
}

/// Obstruction scan as a JSON array of `{descriptor, witness}` objects,
/// witnesses given as element labels.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer. Free the result with
/// [`gl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gl_group_scan_json(g: *const GlGroup, exhaustive: bool, out: *mut *mut c_char) -> GlStatus {
    guard(|| {
        let g = group(g)?;
        let found = scan(
            g,
            &ScanOptions {
                exhaustive,
                ..Default::default()
            },
        )?;
        let items: Vec<serde_json::Value> = found
            .iter()
            .map(|f| {
                let witness: Vec<&str> = f.witness.iter().map(|&x| g.label(x)).collect();
                serde_json::json!({ "descriptor": f.descriptor, "witness": witness })
            })
            .collect();
        put(out, owned(serde_json::Value::Array(items).to_string()))
    })
}

/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_group_is_isomorphic(a: *const GlGroup, b: *const GlGroup, out: *mut bool) -> GlStatus {
    guard(|| put(out, is_isomorphic(group(a)?, group(b)?)))
}

/// Size of the automorphism group; groups above order 120 are refused.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_group_automorphism_count(g: *const GlGroup, out: *mut usize) -> GlStatus {
    guard(|| put(out, automorphisms(group(g)?, DEFAULT_AUT_CAP)?.len()))
}

/// Runs a sweep at its default bounds and returns the JSON report. `sweep`
/// is one of `theorem3`, `theorem4`, `theorem5-6`, `nonsolvable`,
/// `corollary3`.
///
/// # Safety
/// `sweep` must be a NUL-terminated string and `out` a valid pointer. Free
/// the result with [`gl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gl_verify_json(sweep: *const c_char, out: *mut *mut c_char) -> GlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let opts = SweepOptions::default();
        let report = match text(sweep)? {
            "theorem3" => verify::verify_cyclic_kernel(verify::THEOREM3_N_MAX, &verify::THEOREM3_PRIMES, &opts)?,
            "theorem4" => verify::verify_dihedral_kernel(verify::THEOREM4_N_MAX, &verify::THEOREM4_PRIMES, &opts)?,
            "theorem5-6" => verify::verify_a4_s4(&verify::THEOREM56_PRIMES, &opts)?,
            "nonsolvable" => verify::verify_nonsolvable(verify::NONSOLVABLE_P_MAX, &opts)?,
            "corollary3" => verify::verify_corollary3(&opts)?,
            other => return Err(Failure(GlStatus::OutOfRange, format!("unknown sweep {other:?}"))),
        };
        put(out, owned(report.to_json()))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
