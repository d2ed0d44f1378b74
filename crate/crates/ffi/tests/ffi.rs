use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use eqiw_ffi::*;

unsafe fn take_string(text: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(text).to_str().unwrap().to_string();
    eqiw_string_free(text);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(eqiw_last_error()).to_str().unwrap().to_string()
}

#[test]
fn gaussian_stickelberger_element() {
    unsafe {
        let mut field = ptr::null_mut();
        assert_eq!(eqiw_field_new(4, ptr::null(), 0, &mut field), EqiwStatus::Ok);
        assert_eq!(eqiw_field_degree(field), 2);
        let (s, t) = ([2u64], [3u64]);
        let mut theta = ptr::null_mut();
        assert_eq!(eqiw_theta_st(field, s.as_ptr(), 1, t.as_ptr(), 1, 1, &mut theta), EqiwStatus::Ok);
        assert_eq!(eqiw_theta_len(theta), 2);
        let coeffs: Vec<String> = (0..2)
            .map(|i| {
                let mut text = ptr::null_mut();
                assert_eq!(eqiw_theta_coefficient(theta, i, &mut text), EqiwStatus::Ok);
                take_string(text)
            })
            .collect();
        assert_eq!(coeffs, ["1", "-1"]);
        let mut text = ptr::null_mut();
        assert_eq!(eqiw_theta_coefficient(theta, 2, &mut text), EqiwStatus::OutOfRange);
        assert!(last_error().contains("outside"));
        eqiw_theta_free(theta);
        eqiw_field_free(field);
    }
}

#[test]
fn errors_become_status_codes() {
    unsafe {
        let mut field = ptr::null_mut();
        assert_eq!(eqiw_field_new(4, ptr::null(), 0, ptr::null_mut()), EqiwStatus::NullPointer);
        assert_eq!(eqiw_field_new(4, ptr::null(), 0, &mut field), EqiwStatus::Ok);
        assert!(last_error().is_empty());
        let t = [2u64];
        let mut theta = ptr::null_mut();
        // T meets the ramified prime 2
        let status = eqiw_theta_st(field, ptr::null(), 0, t.as_ptr(), 1, 1, &mut theta);
        assert_ne!(status, EqiwStatus::Ok);
        assert!(!last_error().is_empty());
        assert!(theta.is_null());
        eqiw_field_free(field);
        eqiw_field_free(ptr::null_mut());
        assert_eq!(eqiw_field_degree(ptr::null()), 0);
    }
}

fn fixture(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn checks_over_json() {
    unsafe {
        for (name, expected) in [("bs_qsqrt-23_p3.json", 0), ("bs_qsqrt-23_p3_corrupted.json", 1)] {
            let json = fixture(name);
            let mut report = ptr::null_mut();
            let mut verdict = -1;
            assert_eq!(eqiw_run_check_json(json.as_ptr(), &mut report, &mut verdict), EqiwStatus::Ok, "{name}");
            assert_eq!(verdict, expected, "{name}");
            let text = take_string(report);
            assert!(text.contains("\"check\": \"brumer-stark\""));
        }
        let bad = CString::new("{\"kind\": \"class_module\"}").unwrap();
        let mut report = ptr::null_mut();
        let mut verdict = -1;
        assert_eq!(eqiw_run_check_json(bad.as_ptr(), &mut report, &mut verdict), EqiwStatus::Schema);
        assert!(last_error().contains("provenance"));
        let garbage = CString::new("not json").unwrap();
        assert_eq!(eqiw_run_check_json(garbage.as_ptr(), &mut report, &mut verdict), EqiwStatus::Schema);
    }
}

#[test]
fn header_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/eqiw.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "eqiw_field_new",
        "eqiw_field_free",
        "eqiw_theta_st",
        "eqiw_theta_coefficient",
        "eqiw_run_check_json",
        "eqiw_last_error",
        "eqiw_string_free",
        "EQIW_STATUS_OK",
    ] {
        assert!(text.contains(symbol), "{symbol} missing from the header");
    }
    // the header must compile as C when a compiler is present
    if let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() {
        assert!(status.success());
    }
}
