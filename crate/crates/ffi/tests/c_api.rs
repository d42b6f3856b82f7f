use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use sharpineq_ffi::*;

fn new_space(text: &str) -> (SharpineqStatus, *mut SharpineqSpace) {
    let c = CString::new(text).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { sharpineq_space_new(c.as_ptr(), &mut handle) };
    (status, handle)
}

fn last_error() -> String {
    let p = sharpineq_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn space_lifecycle_and_queries() {
    let (status, space) = new_space("variant=warped n=2 a=0.5 beta=1");
    assert_eq!(status, SharpineqStatus::Ok);
    let mut x = 0.0;
    unsafe {
        assert_eq!(sharpineq_space_avr(space, &mut x), SharpineqStatus::Ok);
        assert_eq!(x, 0.5);
        assert_eq!(sharpineq_space_dimension(space, &mut x), SharpineqStatus::Ok);
        assert_eq!(x, 2.0);
        assert_eq!(sharpineq_space_vol_ball(space, 1000.0, &mut x), SharpineqStatus::Ok);
        assert!((x / (std::f64::consts::PI * 1e6) - 0.5).abs() < 1e-3);
        assert_eq!(sharpineq_space_minkowski_content(space, 1.0, &mut x), SharpineqStatus::Ok);
        assert!(x > 0.0);
        sharpineq_space_free(space);
        sharpineq_space_free(ptr::null_mut());
    }
}

#[test]
fn euclidean_eigenvalue_is_bessel_zero_squared() {
    let (_, space) = new_space("variant=euclidean n=2");
    let mut lam = 0.0;
    unsafe {
        assert_eq!(sharpineq_fk_eigenvalue(space, 1.0, &mut lam), SharpineqStatus::Ok);
        sharpineq_space_free(space);
    }
    let j0 = 2.404825557695773f64;
    assert!((lam - j0 * j0).abs() < 1e-7 * j0 * j0);
}

#[test]
fn sharp_constants_struct() {
    let mut c = SharpineqConstants::default();
    let status = unsafe { sharpineq_sharp_constants(3.0, 2.0, 0.0, 1.0, &mut c) };
    assert_eq!(status, SharpineqStatus::Ok);
    let closed = 3f64.sqrt().recip() * (2.0 / std::f64::consts::PI).powf(2.0 / 3.0);
    assert!((c.at - closed).abs() < 1e-14);
    assert!((c.gn - c.at).abs() < 1e-12);
    assert_eq!(c.theta, 1.0);
    assert!((c.fk * c.rayleigh - 1.0).abs() < 1e-14);
}

#[test]
fn error_codes_and_messages() {
    let (status, handle) = new_space("variant=cone n=2 m_M=100");
    assert_eq!(status, SharpineqStatus::DomainError);
    assert!(handle.is_null());
    assert!(last_error().contains("domain"));

    let (status, _) = new_space("variant=warped n=2 a=0.5 gamma=1");
    assert_eq!(status, SharpineqStatus::ParseError);
    assert!(last_error().contains("gamma"));

    let mut c = SharpineqConstants::default();
    let status = unsafe { sharpineq_sharp_constants(3.0, 4.0, 0.0, 1.0, &mut c) };
    assert_eq!(status, SharpineqStatus::DomainError);
    assert!(last_error().contains("p < n"));

    let (_, ale) = new_space("variant=ale n=3 k=4");
    let mut x = 0.0;
    unsafe {
        assert_eq!(sharpineq_fk_eigenvalue(ale, 1.0, &mut x), SharpineqStatus::Unsupported);
        assert_eq!(sharpineq_space_avr(ale, &mut x), SharpineqStatus::Ok);
        assert_eq!(x, 0.25);
        assert_eq!(sharpineq_space_vol_ball(ale, 1.0, &mut x), SharpineqStatus::Unsupported);
        assert_eq!(sharpineq_space_avr(ale, ptr::null_mut()), SharpineqStatus::NullPointer);
        assert_eq!(sharpineq_space_avr(ptr::null(), &mut x), SharpineqStatus::NullPointer);
        assert_eq!(sharpineq_space_new(ptr::null(), &mut ptr::null_mut()), SharpineqStatus::NullPointer);
        sharpineq_space_free(ale);
    }
    let (_, flat) = new_space("variant=euclidean n=3");
    unsafe {
        assert_eq!(sharpineq_space_vol_ball(flat, -1.0, &mut x), SharpineqStatus::DomainError);
        sharpineq_space_free(flat);
    }
}

#[test]
fn invalid_utf8_is_reported() {
    let bytes = [0xffu8, 0xfe, 0];
    let mut handle = ptr::null_mut();
    let status = unsafe { sharpineq_space_new(bytes.as_ptr().cast(), &mut handle) };
    assert_eq!(status, SharpineqStatus::InvalidUtf8);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sharpineq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sharpineq.h")).unwrap();
    for name in [
        "sharpineq_space_new",
        "sharpineq_space_free",
        "sharpineq_space_avr",
        "sharpineq_space_vol_ball",
        "sharpineq_space_minkowski_content",
        "sharpineq_fk_eigenvalue",
        "sharpineq_sharp_constants",
        "sharpineq_last_error",
        "typedef struct SharpineqSpace SharpineqSpace",
        "SHARPINEQ_STATUS_DOMAIN_ERROR = 4",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Directory holding this test's build artifacts (`target/<profile>`).
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = artifact_dir().join("libsharpineq_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link test: no C compiler or no {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "sharpineq.h"
int main(void) {
    SharpineqSpace *s = NULL;
    if (sharpineq_space_new("variant=cone n=2 m_M=6", &s) != SHARPINEQ_STATUS_OK) return 10;
    double avr = 0.0, vol = 0.0;
    if (sharpineq_space_avr(s, &avr) != SHARPINEQ_STATUS_OK) return 11;
    if (sharpineq_space_vol_ball(s, 2.0, &vol) != SHARPINEQ_STATUS_OK) return 12;
    sharpineq_space_free(s);
    SharpineqConstants c;
    if (sharpineq_sharp_constants(3.0, 2.0, 0.0, 1.0, &c) != SHARPINEQ_STATUS_OK) return 13;
    if (sharpineq_space_new("variant=nope n=2", &s) != SHARPINEQ_STATUS_PARSE_ERROR) return 14;
    printf("%.17g %.17g %.17g\n", avr, vol, c.at);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let vals: Vec<f64> = text.split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert!((vals[0] - 6.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert_eq!(vals[1], 16.0);
    assert!((vals[2] - 0.427_260_542_862_526_7).abs() < 1e-14);
}
