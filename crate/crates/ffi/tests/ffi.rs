use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use skewtorsion_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(st_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn g2_stabilizer_through_handles() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(st_form_g2(&mut f), StStatus::StOk);
        let mut g = ptr::null_mut();
        assert_eq!(st_stabilizer(f, &mut g), StStatus::StOk);
        assert_eq!(st_algebra_dim(g), 14);
        let mut s = ptr::null_mut();
        assert_eq!(st_form_to_json(f, &mut s), StStatus::StOk);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        st_string_free(s);
        let mut back = ptr::null_mut();
        let c = CString::new(text).unwrap();
        assert_eq!(st_form_from_json(c.as_ptr(), &mut back), StStatus::StOk);
        let mut g2 = ptr::null_mut();
        assert_eq!(st_stabilizer(back, &mut g2), StStatus::StOk);
        assert_eq!(st_algebra_dim(g2), 14);
        st_algebra_free(g);
        st_algebra_free(g2);
        st_form_free(f);
        st_form_free(back);
    }
}

#[test]
fn built_forms() {
    unsafe {
        // vol3 on R^3 is invariant under all of so(3)
        let mut f = ptr::null_mut();
        assert_eq!(st_form_new(3, 3, &mut f), StStatus::StOk);
        let idx = [2usize, 0, 1];
        assert_eq!(st_form_add_term(f, idx.as_ptr(), 3, 1, 2), StStatus::StOk);
        let mut g = ptr::null_mut();
        assert_eq!(st_stabilizer(f, &mut g), StStatus::StOk);
        assert_eq!(st_algebra_dim(g), 3);
        assert_eq!(st_form_add_term(f, idx.as_ptr(), 2, 1, 1), StStatus::StErrParam);
        assert_eq!(st_form_add_term(f, idx.as_ptr(), 3, 1, 0), StStatus::StErrParam);
        st_algebra_free(g);
        st_form_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        assert_eq!(st_stabilizer(ptr::null(), ptr::null_mut()), StStatus::StErrNull);
        assert!(last_error().contains("null"));
        let bad = CString::new("{\"dim\": 3").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(st_form_from_json(bad.as_ptr(), &mut f), StStatus::StErrParse);
        assert!(f.is_null());
        let name = CString::new("nope").unwrap();
        let mut b = ptr::null_mut();
        assert_eq!(st_model_build(name.as_ptr(), ptr::null(), StMode::StExact, &mut b), StStatus::StErrUnknown);
        let mut rep = ptr::null_mut();
        let mut ok = false;
        assert_eq!(st_run_suite(name.as_ptr(), StMode::StExact, 0, 1e-9, &mut rep, &mut ok), StStatus::StErrUnknown);
        assert!(last_error().contains("unknown suite"));
        st_form_free(ptr::null_mut());
        st_string_free(ptr::null_mut());
    }
}

#[test]
fn models_and_suites() {
    unsafe {
        let name = CString::new("sphere").unwrap();
        let params = CString::new("alpha=1, delta=5").unwrap();
        let mut b = ptr::null_mut();
        assert_eq!(st_model_build(name.as_ptr(), params.as_ptr(), StMode::StExact, &mut b), StStatus::StOk, "{}", last_error());
        assert_eq!(st_bundle_dim(b), 7);
        let mut d = 0usize;
        assert_eq!(st_bundle_stabilizer_dim(b, &mut d), StStatus::StOk);
        assert_eq!(d, 14);
        let mut s = ptr::null_mut();
        assert_eq!(st_bundle_to_json(b, &mut s), StStatus::StOk);
        assert!(CStr::from_ptr(s).to_str().unwrap().contains("\"tau\""));
        st_string_free(s);
        st_bundle_free(b);

        let name = CString::new("flag").unwrap();
        assert_eq!(st_model_build(name.as_ptr(), ptr::null(), StMode::StFloat, &mut b), StStatus::StOk);
        assert_eq!(st_bundle_holonomy_dim(b, &mut d), StStatus::StOk);
        assert_eq!(d, 2);
        st_bundle_free(b);

        let suite = CString::new("dim3").unwrap();
        let mut rep = ptr::null_mut();
        let mut ok = false;
        assert_eq!(st_run_suite(suite.as_ptr(), StMode::StExact, 0, 1e-9, &mut rep, &mut ok), StStatus::StOk);
        assert!(ok);
        assert!(CStr::from_ptr(rep).to_str().unwrap().starts_with('{'));
        st_string_free(rep);
    }
}

#[test]
fn header_is_generated() {
    let h = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/skewtorsion.h");
    let text = std::fs::read_to_string(h).unwrap();
    for sym in ["st_stabilizer", "st_form_free", "st_run_suite", "ST_ERR_NULL", "typedef struct StForm StForm"] {
        assert!(text.contains(sym), "{sym}");
    }
}

/// Compiles and runs a C client against the static library when a C compiler is present.
#[test]
fn c_client() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR").map(PathBuf::from).unwrap_or_else(|| root.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let lib = target.join(profile).join("libskewtorsion_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C client: no cc or static library at {}", lib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let src = dir.join("client.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "skewtorsion.h"
int main(void) {
    StForm *f = NULL;
    StAlgebra *g = NULL;
    if (st_form_g2(&f) != ST_OK) return 3;
    if (st_stabilizer(f, &g) != ST_OK) return 4;
    printf("%zu\n", (size_t)st_algebra_dim(g));
    st_algebra_free(g);
    st_form_free(f);
    return st_stabilizer(NULL, &g) == ST_ERR_NULL ? 0 : 5;
}
"#,
    )
    .unwrap();
    let exe = dir.join("client");
    let st = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "14");
}
