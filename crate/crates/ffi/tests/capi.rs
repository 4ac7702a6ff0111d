use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use newton_graph_ffi::*;

fn unity_cubic() -> *mut NgMap {
    let s = 3f64.sqrt() / 2.0;
    let re = [1.0, -0.5, -0.5];
    let im = [0.0, s, -s];
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { ng_map_from_roots(re.as_ptr(), im.as_ptr(), ptr::null(), 3, &mut map) }, NgStatus::Ok);
    map
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ng_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn map_handle_lifecycle() {
    let map = unity_cubic();
    let mut d = 0;
    assert_eq!(unsafe { ng_map_degree(map, &mut d) }, NgStatus::Ok);
    assert_eq!(d, 3);
    let (mut re, mut im, mut inf) = (0.0, 0.0, false);
    assert_eq!(unsafe { ng_map_eval(map, 1e200, 0.0, &mut re, &mut im, &mut inf) }, NgStatus::Ok);
    assert!(inf);
    assert_eq!(unsafe { ng_map_eval(map, 2.0, 0.0, &mut re, &mut im, &mut inf) }, NgStatus::Ok);
    assert!(!inf && (re - 17.0 / 12.0).abs() < 1e-12);
    assert_eq!(unsafe { ng_map_eval(map, 1.0, 0.0, &mut re, &mut im, &mut inf) }, NgStatus::Ok);
    assert!(!inf && (re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ng_map_analyze(map, &mut json) }, NgStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"postcritically_fixed\": true"));
    unsafe {
        ng_string_free(json);
        ng_map_free(map);
    }
}

#[test]
fn newton_graph_through_the_abi() {
    let map = unity_cubic();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ng_newton_graph_compute(map, 20, &mut g) }, NgStatus::Ok);
    let (mut n, mut valid) = (0, false);
    assert_eq!(unsafe { ng_newton_graph_level(g, &mut n, &mut valid) }, NgStatus::Ok);
    assert_eq!((n, valid), (2, true));
    let (mut v, mut e) = (0, 0);
    assert_eq!(unsafe { ng_newton_graph_counts(g, 1, &mut v, &mut e) }, NgStatus::Ok);
    assert_eq!((v, e), (8, 9));
    assert_eq!(unsafe { ng_newton_graph_counts(g, 7, &mut v, &mut e) }, NgStatus::Input);
    assert!(last_error().contains("no level 7"));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ng_newton_graph_report(g, &mut json) }, NgStatus::Ok);
    assert!(unsafe { CStr::from_ptr(json) }.to_str().unwrap().contains("\"overall\": true"));
    unsafe {
        ng_string_free(json);
        ng_newton_graph_free(g);
        ng_map_free(map);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut map = ptr::null_mut();
    let re = [1.0, 1.0];
    let im = [0.0, 0.0];
    assert_eq!(unsafe { ng_map_from_roots(re.as_ptr(), im.as_ptr(), ptr::null(), 2, &mut map) }, NgStatus::Input);
    assert!(map.is_null());
    assert!(last_error().contains("coincide"));
    assert_eq!(unsafe { ng_map_from_roots(ptr::null(), im.as_ptr(), ptr::null(), 2, &mut map) }, NgStatus::NullPointer);
    let mut d = 0;
    assert_eq!(unsafe { ng_map_degree(ptr::null(), &mut d) }, NgStatus::NullPointer);
    let mut buf = [0 as std::ffi::c_char; 5];
    let full = unsafe { ng_last_error_copy(buf.as_mut_ptr(), buf.len()) };
    assert_eq!(full, "map is null".len());
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "map ");
}

#[test]
fn non_pcf_map_is_a_verdict() {
    // z^3 + (0.3 + 0.1i) z + 1
    let re = [1.0, 0.3, 0.0, 1.0];
    let im = [0.0, 0.1, 0.0, 0.0];
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { ng_map_from_coeffs(re.as_ptr(), im.as_ptr(), 4, &mut map) }, NgStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ng_newton_graph_compute(map, 5, &mut g) }, NgStatus::Verdict);
    assert!(g.is_null());
    unsafe { ng_map_free(map) };
}

#[test]
fn matrix_functions() {
    let m = [0.0, 0.25, 1.0, 0.0];
    let mut l = 0.0;
    assert_eq!(unsafe { ng_leading_eigenvalue(m.as_ptr(), 2, &mut l) }, NgStatus::Ok);
    assert!((l - 0.5).abs() < 1e-10);
    let mut irr = false;
    assert_eq!(unsafe { ng_is_irreducible(m.as_ptr(), 2, &mut irr) }, NgStatus::Ok);
    assert!(irr);
    let bad = [-1.0];
    assert_eq!(unsafe { ng_leading_eigenvalue(bad.as_ptr(), 1, &mut l) }, NgStatus::Input);
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/newton_graph.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    for f in [
        "ng_last_error",
        "ng_last_error_copy",
        "ng_version",
        "ng_string_free",
        "ng_map_from_roots",
        "ng_map_from_coeffs",
        "ng_map_set_tol_fix",
        "ng_map_free",
        "ng_map_degree",
        "ng_map_eval",
        "ng_map_analyze",
        "ng_newton_graph_compute",
        "ng_newton_graph_free",
        "ng_newton_graph_level",
        "ng_newton_graph_counts",
        "ng_newton_graph_json",
        "ng_newton_graph_report",
        "ng_leading_eigenvalue",
        "ng_is_irreducible",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from the header");
    }
    assert!(h.contains("typedef struct NgMap NgMap;"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "newton_graph.h"

int main(void) {
    double re[3] = {1.0, -0.5, -0.5};
    double im[3] = {0.0, 0.8660254037844386, -0.8660254037844386};
    NgMap *map = NULL;
    if (ng_map_from_roots(re, im, NULL, 3, &map) != NG_STATUS_OK) return 10;
    NgNewtonGraph *g = NULL;
    if (ng_newton_graph_compute(map, 20, &g) != NG_STATUS_OK) return 11;
    size_t n = 0;
    bool valid = false;
    ng_newton_graph_level(g, &n, &valid);
    printf("%zu %d\n", n, valid ? 1 : 0);
    ng_newton_graph_free(g);
    ng_map_free(map);
    return 0;
}
"#;

/// Compiles a C client against the generated header and the shared
/// library built next to this test binary.
#[test]
fn c_client_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libnewton_graph_ffi.so");
    assert!(lib.exists(), "shared library not found at {}", lib.display());
    let dir = std::env::temp_dir().join(format!("ng_capi_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.join("client");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg("-L")
        .arg(profile_dir)
        .arg("-lnewton_graph_ffi")
        .arg(format!("-Wl,-rpath,{}", profile_dir.display()))
        .arg("-o")
        .arg(&bin)
        .status()
        .expect("cc available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2 1");
    let _ = std::fs::remove_dir_all(&dir);
}
