//! C ABI over eqiw: opaque field and Θ handles, fixture checks on JSON
//! strings, status codes and a per-thread last-error message.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eqiw::harness::{parse_fixture, render, run_fixture};
use eqiw::lfun::{theta_st, AbelianField};
use eqiw::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqiwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidPrime = 3,
    InvalidArgument = 4,
    PrecisionTooLarge = 5,
    NotInvertible = 6,
    RingMismatch = 7,
    PrecisionExhausted = 8,
    TruncationTooSmall = 9,
    Indeterminate = 10,
    NonzeroMu = 11,
    Hypothesis = 12,
    NotExact = 13,
    SizeLimit = 14,
    Inconsistent = 15,
    Schema = 16,
    Io = 17,
    OutOfRange = 18,
    Panic = 19,
}

impl From<&Error> for EqiwStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::InvalidPrime(_) => EqiwStatus::InvalidPrime,
            Error::InvalidArgument(_) => EqiwStatus::InvalidArgument,
            Error::PrecisionTooLarge { .. } => EqiwStatus::PrecisionTooLarge,
            Error::NotInvertible(_) => EqiwStatus::NotInvertible,
            Error::RingMismatch(_) => EqiwStatus::RingMismatch,
            Error::PrecisionExhausted(_) => EqiwStatus::PrecisionExhausted,
            Error::TruncationTooSmall(_) => EqiwStatus::TruncationTooSmall,
            Error::Indeterminate(_) => EqiwStatus::Indeterminate,
            Error::NonzeroMu(_) => EqiwStatus::NonzeroMu,
            Error::Hypothesis(_) => EqiwStatus::Hypothesis,
            Error::NotExact(_) => EqiwStatus::NotExact,
            Error::SizeLimit(_) => EqiwStatus::SizeLimit,
            Error::Inconsistent(_) => EqiwStatus::Inconsistent,
            Error::Schema(_) => EqiwStatus::Schema,
            Error::Io(_) => EqiwStatus::Io,
        }
    }
}

/// An abelian number field K ⊆ Q(ζ_f).
pub struct EqiwField(AbelianField);

/// Θ_{S,T}(1−m) ∈ Q[G], coefficients indexed by the group enumeration.
pub struct EqiwTheta {
    coefficients: Vec<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// Runs `body`, recording errors and panics as a status.
fn guard(body: impl FnOnce() -> Result<(), (EqiwStatus, String)>) -> EqiwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            EqiwStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EqiwStatus::Panic
        }
    }
}

fn lift(err: Error) -> (EqiwStatus, String) {
    (EqiwStatus::from(&err), err.to_string())
}

fn null(what: &str) -> (EqiwStatus, String) {
    (EqiwStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `data` must point to `len` readable values, or be null with `len` = 0.
unsafe fn slice<'a>(data: *const u64, len: usize, what: &str) -> Result<&'a [u64], (EqiwStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// The message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn eqiw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `text` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eqiw_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// The subfield of Q(ζ_conductor) fixed by the subgroup of (Z/conductor)^×
/// generated by `kernel`.
///
/// # Safety
/// `kernel` must point to `kernel_len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqiw_field_new(
    conductor: u64,
    kernel: *const u64,
    kernel_len: usize,
    out: *mut *mut EqiwField,
) -> EqiwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let gens = slice(kernel, kernel_len, "kernel")?;
        let field = AbelianField::from_subgroup(conductor, gens).map_err(lift)?;
        *out = Box::into_raw(Box::new(EqiwField(field)));
        Ok(())
    })
}

/// # Safety
/// `field` must come from `eqiw_field_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eqiw_field_free(field: *mut EqiwField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// [K : Q], or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqiw_field_degree(field: *const EqiwField) -> usize {
    field.as_ref().map_or(0, |f| f.0.degree())
}

/// Θ_{S,T}(1−m) for the finite places S and the set T.
///
/// # Safety
/// `field` must be a live handle, `s`/`t` must point to `s_len`/`t_len`
/// values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqiw_theta_st(
    field: *const EqiwField,
    s: *const u64,
    s_len: usize,
    t: *const u64,
    t_len: usize,
    m: u32,
    out: *mut *mut EqiwTheta,
) -> EqiwStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = slice(s, s_len, "S")?;
        let t = slice(t, t_len, "T")?;
        let theta = theta_st(&field.0, s, t, m).map_err(lift)?;
        let coefficients = theta.elem.coeffs().iter().map(|c| c.to_string()).collect();
        *out = Box::into_raw(Box::new(EqiwTheta { coefficients }));
        Ok(())
    })
}

/// Number of coefficients, |G|; 0 for a null handle.
///
/// # Safety
/// `theta` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqiw_theta_len(theta: *const EqiwTheta) -> usize {
    theta.as_ref().map_or(0, |x| x.coefficients.len())
}

/// The coefficient at a group index as an exact fraction string "a" or
/// "a/b"; free it with `eqiw_string_free`.
///
/// # Safety
/// `theta` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn eqiw_theta_coefficient(theta: *const EqiwTheta, index: usize, out: *mut *mut c_char) -> EqiwStatus {
    guard(|| {
        let theta = theta.as_ref().ok_or_else(|| null("theta"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = theta
            .coefficients
            .get(index)
            .ok_or_else(|| (EqiwStatus::OutOfRange, format!("index {index} outside 0..{}", theta.coefficients.len())))?;
        *out = into_c_string(text.clone());
        Ok(())
    })
}

/// # Safety
/// `theta` must come from `eqiw_theta_st` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eqiw_theta_free(theta: *mut EqiwTheta) {
    if !theta.is_null() {
        drop(Box::from_raw(theta));
    }
}

/// Runs the check described by a fixture JSON document. On success the
/// report is written to `report` (free with `eqiw_string_free`) and the
/// verdict to `verdict`: 0 pass, 1 fail, 2 not applicable.
///
/// # Safety
/// `fixture_json` must be a NUL-terminated string; `report` and `verdict`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn eqiw_run_check_json(
    fixture_json: *const c_char,
    report: *mut *mut c_char,
    verdict: *mut i32,
) -> EqiwStatus {
    guard(|| {
        if fixture_json.is_null() {
            return Err(null("fixture_json"));
        }
        if report.is_null() || verdict.is_null() {
            return Err(null("output"));
        }
        let text = CStr::from_ptr(fixture_json)
            .to_str()
            .map_err(|e| (EqiwStatus::InvalidUtf8, e.to_string()))?;
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| lift(e.into()))?;
        let fixture = parse_fixture(&value).map_err(lift)?;
        let outcome = run_fixture(&fixture).map_err(lift)?;
        *report = into_c_string(render(&outcome.to_json()));
        *verdict = outcome.overall().exit_code();
        Ok(())
    })
}
