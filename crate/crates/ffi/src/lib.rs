//! C ABI for tancert.
//!
//! Certificates are opaque handles released with `tancert_certificate_free`;
//! strings returned by the library are released with `tancert_string_free`.
//! Every function returns a `TancertError`; on failure a description is
//! available from `tancert_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tancert::analysis;
use tancert::certifier::{self, Certificate, CertifyConfig, InequalityId, Status};
use tancert::lemma;
use tancert::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TancertError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownId = 3,
    Domain = 4,
    NotPositive = 5,
    OrderMismatch = 6,
    IdentityMismatch = 7,
    NoSignChange = 8,
    Format = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TancertStatus {
    Certified = 0,
    Undecided = 1,
    Falsified = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TancertCrossover {
    Upper = 0,
    Lower = 1,
}

/// Certifier settings; obtain defaults from `tancert_config_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TancertConfig {
    pub delta: f64,
    pub epsilon_max: f64,
    pub degree: u32,
    pub max_depth: u32,
    pub min_width: f64,
    pub near_zero: bool,
}

/// Opaque certificate handle.
pub struct TancertCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> TancertError {
    match e {
        Error::Domain(_) | Error::RadiusTooLarge { .. } | Error::CosNotPositive(_) => TancertError::Domain,
        Error::NotPositive(_) => TancertError::NotPositive,
        Error::OrderMismatch(_) => TancertError::OrderMismatch,
        Error::IdentityMismatch(_) | Error::IdentityViolation { .. } => TancertError::IdentityMismatch,
        Error::NoSignChange(_) => TancertError::NoSignChange,
        Error::UnknownId(_) => TancertError::UnknownId,
        Error::HexFloat(_) | Error::Format(_) => TancertError::Format,
    }
}

fn fail(code: TancertError, msg: impl AsRef<str>) -> TancertError {
    set_error(msg.as_ref());
    code
}

fn guarded(f: impl FnOnce() -> TancertError) -> TancertError {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(TancertError::Panic, "internal panic"))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TancertError> {
    if p.is_null() {
        return Err(fail(TancertError::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TancertError::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> TancertError {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TancertError::Ok
        }
        Err(_) => fail(TancertError::Format, "string contains NUL"),
    }
}

impl From<&CertifyConfig> for TancertConfig {
    fn from(c: &CertifyConfig) -> Self {
        TancertConfig {
            delta: c.delta,
            epsilon_max: c.epsilon_max,
            degree: c.degree as u32,
            max_depth: c.max_depth,
            min_width: c.min_width,
            near_zero: c.near_zero,
        }
    }
}

impl From<&TancertConfig> for CertifyConfig {
    fn from(c: &TancertConfig) -> Self {
        CertifyConfig {
            delta: c.delta,
            epsilon_max: c.epsilon_max,
            degree: c.degree as usize,
            max_depth: c.max_depth,
            min_width: c.min_width,
            near_zero: c.near_zero,
        }
    }
}

#[no_mangle]
pub extern "C" fn tancert_config_default() -> TancertConfig {
    TancertConfig::from(&CertifyConfig::default())
}

/// Certifies inequality `id` (e.g. `"main_lower"`). `config` may be null for
/// defaults. On success `*out` receives a new handle.
///
/// # Safety
/// `id` must be a NUL-terminated string, `config` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_certify(
    id: *const c_char,
    config: *const TancertConfig,
    threads: u32,
    out: *mut *mut TancertCertificate,
) -> TancertError {
    guarded(|| {
        if out.is_null() {
            return fail(TancertError::NullPointer, "null output pointer");
        }
        let id = match read_str(id) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let Ok(id) = id.parse::<InequalityId>() else {
            return fail(TancertError::UnknownId, format!("unknown inequality {id:?}"));
        };
        let cfg = if config.is_null() { CertifyConfig::default() } else { CertifyConfig::from(&*config) };
        match certifier::certify(id, &cfg, threads.max(1) as usize) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(TancertCertificate(c)));
                TancertError::Ok
            }
            Err(e) => fail(code_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `cert` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_certificate_status(
    cert: *const TancertCertificate,
    out: *mut TancertStatus,
) -> TancertError {
    guarded(|| {
        if cert.is_null() || out.is_null() {
            return fail(TancertError::NullPointer, "null argument");
        }
        *out = match (*cert).0.status {
            Status::Certified => TancertStatus::Certified,
            Status::Undecided => TancertStatus::Undecided,
            Status::Falsified => TancertStatus::Falsified,
        };
        TancertError::Ok
    })
}

/// # Safety
/// `cert` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_certificate_box_count(
    cert: *const TancertCertificate,
    out: *mut usize,
) -> TancertError {
    guarded(|| {
        if cert.is_null() || out.is_null() {
            return fail(TancertError::NullPointer, "null argument");
        }
        *out = (*cert).0.boxes.len();
        TancertError::Ok
    })
}

/// Serializes the certificate; release the string with `tancert_string_free`.
///
/// # Safety
/// `cert` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_certificate_to_json(
    cert: *const TancertCertificate,
    out: *mut *mut c_char,
) -> TancertError {
    guarded(|| {
        if cert.is_null() || out.is_null() {
            return fail(TancertError::NullPointer, "null argument");
        }
        write_string(out, (*cert).0.to_json())
    })
}

/// # Safety
/// `cert` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tancert_certificate_free(cert: *mut TancertCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tancert_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Re-verifies a certificate given as JSON text. `*valid` is set even when
/// the certificate is rejected; the diagnoses go to the last error message.
///
/// # Safety
/// `json` must be a NUL-terminated string and `valid` valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_check_json(json: *const c_char, valid: *mut bool) -> TancertError {
    guarded(|| {
        if valid.is_null() {
            return fail(TancertError::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let report = certifier::check_certificate_json(text);
        *valid = report.valid;
        if !report.valid {
            set_error(&report.diagnoses.join("; "));
        }
        TancertError::Ok
    })
}

/// `T_n` as a decimal string (it grows like `9^n`).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_t_seq(n: u32, out: *mut *mut c_char) -> TancertError {
    guarded(|| {
        if out.is_null() {
            return fail(TancertError::NullPointer, "null output pointer");
        }
        write_string(out, lemma::t_seq(n).to_string())
    })
}

/// Certified bracket `[*lo, *hi]` of a crossover point.
///
/// # Safety
/// `lo` and `hi` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_crossover(
    which: TancertCrossover,
    tol: f64,
    lo: *mut f64,
    hi: *mut f64,
) -> TancertError {
    guarded(|| {
        if lo.is_null() || hi.is_null() {
            return fail(TancertError::NullPointer, "null output pointer");
        }
        let r = match which {
            TancertCrossover::Upper => analysis::crossover_upper(tol),
            TancertCrossover::Lower => analysis::crossover_lower(tol),
        };
        match r {
            Ok(r) => {
                *lo = r.bracket.lo();
                *hi = r.bracket.hi();
                TancertError::Ok
            }
            Err(e) => fail(code_of(&e), e.to_string()),
        }
    })
}

/// Exponent ratio at `x` with `bits` of working precision (not certified).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tancert_exponent_ratio(x: f64, bits: u32, out: *mut f64) -> TancertError {
    guarded(|| {
        if out.is_null() {
            return fail(TancertError::NullPointer, "null output pointer");
        }
        match analysis::exponent_ratio(x, bits as usize) {
            Ok(s) => {
                *out = s.phi;
                TancertError::Ok
            }
            Err(e) => fail(code_of(&e), e.to_string()),
        }
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tancert_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
