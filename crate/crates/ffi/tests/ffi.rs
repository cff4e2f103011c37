use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use blowup_core::cli::Output;
use blowup_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(bu_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { bu_string_free(p) };
    s
}

fn presets(m: &str, n: &str, mod2: bool) -> Result<*mut BuScenario, BuStatus> {
    let (m, n) = (CString::new(m).unwrap(), CString::new(n).unwrap());
    let mut out = ptr::null_mut();
    match unsafe { bu_scenario_from_presets(m.as_ptr(), n.as_ptr(), mod2 as i32, &mut out) } {
        BuStatus::Ok => Ok(out),
        status => Err(status),
    }
}

#[test]
fn euler_through_handles() {
    for (m, n, chi) in [
        ("cp:2", "point", 4),
        ("cp:4", "point", 8),
        ("cp:3", "cp-linear:1", 6),
    ] {
        let s = presets(m, n, false).unwrap();
        let mut out = 0i64;
        assert_eq!(unsafe { bu_euler(s, &mut out) }, BuStatus::Ok);
        assert_eq!(out, chi);
        unsafe { bu_scenario_free(s) };
    }
}

#[test]
fn compute_json_parses() {
    let s = presets("cp:2", "point", false).unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { bu_compute_json(s, -1, &mut json) }, BuStatus::Ok);
    let out: Output = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(out.euler, Some(4));
    assert_eq!(out.classes.len(), 3);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { bu_compute_json(s, 1, &mut json) }, BuStatus::Ok);
    let out: Output = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(out.classes.len(), 2);
    unsafe { bu_scenario_free(s) };
}

#[test]
fn verify_reports_all_checks() {
    let s = presets("cp:3", "cp-linear:1", false).unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { bu_verify_json(s, 10, 1, &mut json) }, BuStatus::Ok);
    let out: Output = serde_json::from_str(&take_string(json)).unwrap();
    assert!(out.all_checks_pass());
    assert_eq!(out.checks.unwrap().len(), 11);
    unsafe { bu_scenario_free(s) };
}

#[test]
fn status_codes_for_bad_input() {
    assert_eq!(
        presets("cp:2", "torus", false).unwrap_err(),
        BuStatus::UnknownPreset
    );
    assert!(last_error().contains("torus"));
    assert_eq!(
        presets("cp:2", "point", true).map(|s| unsafe { bu_scenario_free(s) }),
        Ok(())
    );
    assert_eq!(last_error(), "");

    let bad =
        CString::new(r#"{"M":"cp:3","N":"cp-linear:1","E":{"rank":2,"chern":["0"]}}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { bu_scenario_parse(bad.as_ptr(), &mut out) },
        BuStatus::WhitneyViolation
    );
    assert!(out.is_null());

    let broken = CString::new("{\"M\": ").unwrap();
    assert_eq!(
        unsafe { bu_scenario_parse(broken.as_ptr(), &mut out) },
        BuStatus::ParseError
    );
    assert_eq!(
        unsafe { bu_scenario_parse(ptr::null(), &mut out) },
        BuStatus::NullPointer
    );
    assert_eq!(
        unsafe { bu_scenario_formal(6, 2, 0, ptr::null_mut()) },
        BuStatus::NullPointer
    );

    let mut formal = ptr::null_mut();
    assert_eq!(
        unsafe { bu_scenario_formal(6, 2, 0, &mut formal) },
        BuStatus::Ok
    );
    let mut chi = 0;
    assert_eq!(
        unsafe { bu_euler(formal, &mut chi) },
        BuStatus::NoIntegration
    );
    unsafe { bu_scenario_free(formal) };
    assert_eq!(
        unsafe { bu_euler(ptr::null(), &mut chi) },
        BuStatus::NullPointer
    );
    assert_eq!(
        unsafe { bu_scenario_formal(5, 2, 0, &mut formal) },
        BuStatus::DimensionMismatch
    );
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps/
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/blowup.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "typedef struct BuScenario BuScenario",
        "BU_STATUS_OK = 0",
        "bu_scenario_parse",
        "bu_scenario_from_presets",
        "bu_scenario_formal",
        "bu_scenario_free",
        "bu_compute_json",
        "bu_verify_json",
        "bu_euler",
        "bu_string_free",
        "bu_last_error",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libblowup_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!(
            "skipping: no static library at {} or no C compiler",
            lib.display()
        );
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::temp_dir().join(format!("blowup_smoke_{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
