//! C interface to the blow-up engine.
//!
//! Scenarios live behind an opaque [`BuScenario`] handle. Every call returns
//! a [`BuStatus`]; on failure [`bu_last_error`] describes what went wrong.
//! Strings handed out by the library must be released with
//! [`bu_string_free`], handles with [`bu_scenario_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use blowup_core::cli;
use blowup_core::scenario::{self, Scenario};
use blowup_core::{CoefficientMode, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuStatus {
    Ok = 0,
    /// `bu_verify_json` ran and at least one identity check failed.
    CheckFailed = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    UnknownPreset = 5,
    DimensionMismatch = 6,
    WhitneyViolation = 7,
    TableInconsistency = 8,
    NoIntegration = 9,
    InvalidInput = 10,
    /// A panic was caught at the boundary; this is a bug.
    Internal = 11,
}

/// A validated blow-up scenario.
pub struct BuScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(e: &Error) -> BuStatus {
    match e {
        Error::Parse { .. } => BuStatus::ParseError,
        Error::UnknownPreset(_) => BuStatus::UnknownPreset,
        Error::DimensionMismatch(_) | Error::DegreeMismatch(_) => BuStatus::DimensionMismatch,
        Error::WhitneyViolation { .. } => BuStatus::WhitneyViolation,
        Error::TableInconsistency(_) => BuStatus::TableInconsistency,
        Error::NoIntegration { .. } | Error::MissingIntegral { .. } => BuStatus::NoIntegration,
        _ => BuStatus::InvalidInput,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<BuStatus, (BuStatus, String)>) -> BuStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            set_error("");
            status
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            BuStatus::Internal
        }
    }
}

fn engine(e: Error) -> (BuStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (BuStatus, String)> {
    if p.is_null() {
        return Err((BuStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (BuStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn scenario_ref<'a>(s: *const BuScenario) -> Result<&'a Scenario, (BuStatus, String)> {
    s.as_ref()
        .map(|s| &s.inner)
        .ok_or((BuStatus::NullPointer, "null scenario handle".into()))
}

unsafe fn store_handle(out: *mut *mut BuScenario, scenario: Scenario) {
    *out = Box::into_raw(Box::new(BuScenario { inner: scenario }));
}

unsafe fn store_string(out: *mut *mut c_char, text: String) -> Result<(), (BuStatus, String)> {
    let c = CString::new(text).map_err(|_| (BuStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn mode_of(mod2: c_int) -> CoefficientMode {
    if mod2 != 0 {
        CoefficientMode::Mod2
    } else {
        CoefficientMode::Integers
    }
}

fn check_out<T>(out: *mut T) -> Result<(), (BuStatus, String)> {
    if out.is_null() {
        Err((BuStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

/// Parses and validates a JSON scenario. On success `*out` owns a new
/// handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bu_scenario_parse(
    json: *const c_char,
    out: *mut *mut BuScenario,
) -> BuStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(json)?;
        let s = scenario::parse_scenario(text).map_err(engine)?;
        store_handle(out, s);
        Ok(BuStatus::Ok)
    })
}

/// Builds a scenario from presets, e.g. `"cp:3"` and `"cp-linear:1"`.
/// `mod2` selects Z/2 coefficients when nonzero.
///
/// # Safety
/// `m` and `n` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bu_scenario_from_presets(
    m: *const c_char,
    n: *const c_char,
    mod2: c_int,
    out: *mut *mut BuScenario,
) -> BuStatus {
    guard(|| {
        check_out(out)?;
        let (m, n) = (read_str(m)?, read_str(n)?);
        let s = scenario::from_presets(m, n, mode_of(mod2)).map_err(engine)?;
        store_handle(out, s);
        Ok(BuStatus::Ok)
    })
}

/// Formal blow-up of a `dim_n`-manifold inside a `dim_m`-manifold.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bu_scenario_formal(
    dim_m: u32,
    dim_n: u32,
    mod2: c_int,
    out: *mut *mut BuScenario,
) -> BuStatus {
    guard(|| {
        check_out(out)?;
        let s = scenario::formal_scenario(mode_of(mod2), dim_m, dim_n).map_err(engine)?;
        store_handle(out, s);
        Ok(BuStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bu_scenario_free(scenario: *mut BuScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Characteristic classes as JSON. A negative `max_degree` prints all.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bu_compute_json(
    scenario: *const BuScenario,
    max_degree: i32,
    out: *mut *mut c_char,
) -> BuStatus {
    guard(|| {
        check_out(out)?;
        let s = scenario_ref(scenario)?;
        let max = u32::try_from(max_degree).ok();
        let report = cli::compute(s, max).map_err(engine)?;
        store_string(out, report.to_json())?;
        Ok(BuStatus::Ok)
    })
}

/// Runs the identity suite. The report is written to `*out` whether or not
/// the checks pass; the status is `CheckFailed` if any failed.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bu_verify_json(
    scenario: *const BuScenario,
    trials: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> BuStatus {
    guard(|| {
        check_out(out)?;
        let s = scenario_ref(scenario)?;
        let report = cli::verify(s, trials, seed).map_err(engine)?;
        let passed = report.all_checks_pass();
        store_string(out, report.to_json())?;
        if passed {
            Ok(BuStatus::Ok)
        } else {
            Err((BuStatus::CheckFailed, "an identity check failed".into()))
        }
    })
}

/// Euler characteristic of the blow-up. Formal scenarios have no
/// integration and return `NoIntegration`.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bu_euler(scenario: *const BuScenario, out: *mut i64) -> BuStatus {
    guard(|| {
        check_out(out)?;
        let s = scenario_ref(scenario)?;
        let chi = cli::euler(s).map_err(engine)?;
        *out = i64::try_from(&chi).map_err(|_| {
            (
                BuStatus::InvalidInput,
                format!("{chi} does not fit in 64 bits"),
            )
        })?;
        Ok(BuStatus::Ok)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bu_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
