use std::ffi::{CStr, CString};
use std::ptr;

use tancert_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tancert_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn certify_round_trip() {
    let id = CString::new("main_lower").unwrap();
    let mut cert = ptr::null_mut();
    let cfg = tancert_config_default();
    assert_eq!(cfg.degree, 16);
    unsafe {
        assert_eq!(tancert_certify(id.as_ptr(), &cfg, 2, &mut cert), TancertError::Ok);
        let mut status = TancertStatus::Falsified;
        assert_eq!(tancert_certificate_status(cert, &mut status), TancertError::Ok);
        assert_eq!(status, TancertStatus::Certified);
        let mut n = 0usize;
        tancert_certificate_box_count(cert, &mut n);
        assert!(n > 0);

        let mut json = ptr::null_mut();
        assert_eq!(tancert_certificate_to_json(cert, &mut json), TancertError::Ok);
        let mut valid = false;
        assert_eq!(tancert_check_json(json, &mut valid), TancertError::Ok);
        assert!(valid);
        tancert_string_free(json);
        tancert_certificate_free(cert);
    }
}

#[test]
fn rejects_tampered_json() {
    let text = CString::new(r#"{"schema": "nope"}"#).unwrap();
    let mut valid = true;
    unsafe {
        assert_eq!(tancert_check_json(text.as_ptr(), &mut valid), TancertError::Ok);
    }
    assert!(!valid);
    assert!(last_error().contains("unreadable"));
}

#[test]
fn error_codes() {
    let id = CString::new("no_such_id").unwrap();
    let mut cert = ptr::null_mut();
    unsafe {
        assert_eq!(tancert_certify(id.as_ptr(), ptr::null(), 1, &mut cert), TancertError::UnknownId);
        assert!(cert.is_null());
        assert!(last_error().contains("no_such_id"));
        assert_eq!(tancert_certify(ptr::null(), ptr::null(), 1, &mut cert), TancertError::NullPointer);
        let mut cfg = tancert_config_default();
        cfg.delta = 0.75;
        let id = CString::new("main_upper").unwrap();
        assert_eq!(tancert_certify(id.as_ptr(), &cfg, 1, &mut cert), TancertError::Domain);
        let mut v = 0.0;
        assert_eq!(tancert_exponent_ratio(0.0, 128, &mut v), TancertError::Domain);
        tancert_certificate_free(ptr::null_mut());
        tancert_string_free(ptr::null_mut());
    }
}

#[test]
fn sequences_and_analysis() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(tancert_t_seq(5, &mut s), TancertError::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "86016");
        tancert_string_free(s);

        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(tancert_crossover(TancertCrossover::Lower, 1e-3, &mut lo, &mut hi), TancertError::Ok);
        assert!(lo <= 1.5255 && 1.5255 <= hi && hi - lo <= 1e-3);
        assert_eq!(tancert_crossover(TancertCrossover::Upper, 1e-9, &mut lo, &mut hi), TancertError::Domain);

        let mut phi = 0.0;
        assert_eq!(tancert_exponent_ratio(1.0, 128, &mut phi), TancertError::Ok);
        assert!(phi > 1.0 && phi < 1.2);
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/tancert.h");
    for name in [
        "tancert_certify",
        "tancert_certificate_free",
        "tancert_certificate_to_json",
        "tancert_string_free",
        "tancert_check_json",
        "tancert_last_error_message",
        "typedef struct TancertCertificate TancertCertificate",
        "TANCERT_ERROR_UNKNOWN_ID",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
