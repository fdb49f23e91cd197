use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use dilab_ffi::*;

fn last_error() -> String {
    let p = dilab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_roundtrip() {
    let json = CString::new(r#"{"vertices":[{"id":"a","weight":1},{"id":"b","weight":1}],"edges":[["a","b"]]}"#).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(dilab_graph_from_json(json.as_ptr(), &mut g), DILAB_OK);
        assert!(dilab_last_error().is_null());
        let mut n = 0usize;
        assert_eq!(dilab_graph_vertex_count(g, &mut n), DILAB_OK);
        assert_eq!(n, 2);
        let mut rate = 0.0;
        assert_eq!(dilab_graph_growth_rate(g, &mut rate), DILAB_OK);
        assert!((rate - 1.0).abs() < 1e-12);
        let mut text = ptr::null_mut();
        assert_eq!(dilab_graph_clique_polynomial(g, &mut text), DILAB_OK);
        assert!(!CStr::from_ptr(text).to_str().unwrap().is_empty());
        dilab_string_free(text);
        dilab_graph_free(g);
    }
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(dilab_graph_from_json(ptr::null(), &mut g), DILAB_ERR_NULL_POINTER);
        assert!(g.is_null());
        assert!(last_error().contains("json"));

        let bad = CString::new("{not json").unwrap();
        assert_eq!(dilab_graph_from_json(bad.as_ptr(), &mut g), DILAB_ERR_PARSE);
        assert!(g.is_null());

        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(
            dilab_graph_from_json(invalid.as_ptr().cast(), &mut g),
            DILAB_ERR_INVALID_UTF8
        );

        let mut v = 0.0;
        assert_eq!(dilab_underline_delta(2, &mut v), DILAB_ERR_DOMAIN);
        assert_eq!(dilab_underline_delta(9, ptr::null_mut()), DILAB_ERR_NULL_POINTER);

        let id = CString::new("no-such-case").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(dilab_minimize_builtin(id.as_ptr(), 9, &mut out), DILAB_ERR_NOT_FOUND);
        assert!(out.is_null());
        assert!(last_error().contains("no-such-case"));

        let m = CString::new(r#"{"matrix":[[0,1],[0,0]]}"#).unwrap();
        let mut d = ptr::null_mut();
        assert_eq!(dilab_digraph_from_json(m.as_ptr(), &mut d), DILAB_OK);
        let mut eq = 0;
        assert_eq!(dilab_digraph_verify_mcmullen(d, &mut eq), DILAB_ERR_DOMAIN);
        dilab_digraph_free(d);

        dilab_graph_free(ptr::null_mut());
        dilab_string_free(ptr::null_mut());
    }
}

#[test]
fn digraph_and_delta() {
    let m = CString::new(r#"{"matrix":[[1,1],[1,1]]}"#).unwrap();
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(dilab_digraph_from_json(m.as_ptr(), &mut d), DILAB_OK);
        let mut count = 0usize;
        assert_eq!(dilab_digraph_curve_count(d, &mut count), DILAB_OK);
        assert_eq!(count, 3);
        let mut eq = 0;
        assert_eq!(dilab_digraph_verify_mcmullen(d, &mut eq), DILAB_OK);
        assert_eq!(eq, 1);
        let mut r = 0.0;
        assert_eq!(dilab_digraph_spectral_radius(d, &mut r), DILAB_OK);
        assert!((r - 2.0).abs() < 1e-12);
        dilab_digraph_free(d);

        let mut v = 0.0;
        assert_eq!(dilab_underline_delta(9, &mut v), DILAB_OK);
        assert!((v - 1.34372).abs() < 5e-6);
        assert_eq!(dilab_lower_bound(6, &mut v), DILAB_OK);
        assert!((v - 14.5f64.powf(1.0 / 6.0)).abs() < 1e-12);
    }
}

#[test]
fn minimize_and_fold() {
    let id = CString::new("I.half-n").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(dilab_minimize_builtin(id.as_ptr(), 9, &mut out), DILAB_OK);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        dilab_string_free(out);
        assert!((v["min"].as_f64().unwrap() - 16.0).abs() < 1e-6);
        assert_eq!(v["meets_bound"], true);

        let script = CString::new(
            r#"{"edges":[{"id":"a","role":"filament"},{"id":"b","role":"petal"}],
                "folds":[{"kind":3,"e0":"a","e1":"b"}],
                "closing_perm":{}}"#,
        )
        .unwrap();
        let mut ok = -1;
        assert_eq!(dilab_fold_script_check(script.as_ptr(), &mut ok), DILAB_OK);
        assert_eq!(ok, 1);
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/dilab.h");
    let text = std::fs::read_to_string(&header).expect("header generated by the build script");
    for name in ["dilab_last_error", "dilab_string_free", "dilab_graph_from_json", "dilab_minimize_builtin", "DILAB_ERR_PANIC"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let out = std::env::temp_dir().join("dilab_header_check.o");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .arg("-o")
        .arg(&out)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "cc rejected the header"),
        Err(e) => eprintln!("skipping C compile check: {e}"),
    }
}
