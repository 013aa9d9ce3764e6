use std::ffi::{CStr, CString};
use std::ptr;

use dpsbm_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = dpsbm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const BASBM: &str = r#"{"variant": "basbm", "n": 200, "a": 30, "b": 2, "rho": 0.4}"#;

fn generate(params: &str, seed: u64) -> (*mut DpsbmGraph, *mut DpsbmPartition) {
    let (mut g, mut t) = (ptr::null_mut(), ptr::null_mut());
    let s = unsafe { dpsbm_generate(cstr(params).as_ptr(), seed, &mut g, &mut t) };
    assert_eq!(s, DpsbmStatus::Ok);
    (g, t)
}

#[test]
fn generate_recover_certify() {
    let (g, truth) = generate(BASBM, 1);
    unsafe {
        assert_eq!(dpsbm_graph_n(g), 200);
        let params = cstr(BASBM);
        let mut rec = ptr::null_mut();
        assert_eq!(dpsbm_recover(g, params.as_ptr(), &mut rec), DpsbmStatus::Ok);
        let mut same = false;
        assert_eq!(dpsbm_partition_equal(rec, truth, &mut same), DpsbmStatus::Ok);
        assert!(same);

        let mut valid = false;
        assert_eq!(dpsbm_certify(g, truth, params.as_ptr(), f64::NAN, &mut valid), DpsbmStatus::Ok);
        assert!(valid);

        let mut labels = vec![0u32; 200];
        assert_eq!(dpsbm_partition_labels(truth, labels.as_mut_ptr(), 200), DpsbmStatus::Ok);
        assert_eq!(labels.iter().filter(|&&l| l == labels[0]).count(), 80);
        assert_eq!(dpsbm_partition_labels(truth, labels.as_mut_ptr(), 10), DpsbmStatus::ShapeMismatch);

        dpsbm_partition_free(rec);
        dpsbm_partition_free(truth);
        dpsbm_graph_free(g);
    }
}

#[test]
fn edge_list_round_trip() {
    let (g, _) = generate(r#"{"variant": "cbsbm", "n": 30, "a": 6, "rho": 0.5, "xi": 0.1}"#, 4);
    unsafe {
        let mut text = ptr::null_mut();
        assert_eq!(dpsbm_graph_to_edge_list(g, &mut text), DpsbmStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(dpsbm_graph_from_edge_list(text, &mut h), DpsbmStatus::Ok);
        for i in 0..30 {
            for j in 0..30 {
                let (mut x, mut y) = (0i8, 0i8);
                assert_eq!(dpsbm_graph_get(g, i, j, &mut x), DpsbmStatus::Ok);
                assert_eq!(dpsbm_graph_get(h, i, j, &mut y), DpsbmStatus::Ok);
                assert_eq!(x, y);
            }
        }
        dpsbm_string_free(text);
        dpsbm_graph_free(h);
        dpsbm_graph_free(g);
    }
}

#[test]
fn set_entry_returns_a_copy() {
    let (g, _) = generate(r#"{"variant": "basbm", "n": 10, "a": 2, "b": 1, "rho": 0.5}"#, 0);
    unsafe {
        let mut before = 0i8;
        dpsbm_graph_get(g, 2, 7, &mut before);
        let mut h = ptr::null_mut();
        assert_eq!(dpsbm_graph_set_entry(g, 2, 7, 1 - before, &mut h), DpsbmStatus::Ok);
        let (mut x, mut y) = (0i8, 0i8);
        dpsbm_graph_get(g, 7, 2, &mut x);
        dpsbm_graph_get(h, 7, 2, &mut y);
        assert_eq!((x, y), (before, 1 - before));

        let mut bad = ptr::null_mut();
        assert_eq!(dpsbm_graph_set_entry(g, 2, 7, -1, &mut bad), DpsbmStatus::InvalidArgument);
        assert!(bad.is_null());
        assert_eq!(dpsbm_graph_get(g, 0, 10, &mut x), DpsbmStatus::InvalidArgument);
        assert!(last_error().contains("10"));
        dpsbm_graph_free(h);
        dpsbm_graph_free(g);
    }
}

#[test]
fn private_recover_releases_on_a_dense_instance() {
    let params = r#"{"variant": "basbm", "n": 300, "a": 30, "b": 2, "rho": 0.5}"#;
    let (g, truth) = generate(params, 2);
    unsafe {
        let mut out = ptr::null_mut();
        let mut trace = ptr::null_mut();
        let s = dpsbm_private_recover(g, cstr(params).as_ptr(), 4.0, 1.0 / 90000.0, 4.0, 9, &mut out, &mut trace);
        assert_eq!(s, DpsbmStatus::Ok, "{}", last_error());
        let trace_json = CStr::from_ptr(trace).to_str().unwrap().to_owned();
        let v: serde_json::Value = serde_json::from_str(&trace_json).unwrap();
        assert!(v.is_object());
        assert!(!out.is_null());
        let mut same = false;
        dpsbm_partition_equal(out, truth, &mut same);
        assert!(same);

        let mut bad = ptr::null_mut();
        let s = dpsbm_private_recover(g, cstr(params).as_ptr(), -1.0, 0.01, 2.0, 9, &mut bad, ptr::null_mut());
        assert_eq!(s, DpsbmStatus::InvalidArgument);
        dpsbm_string_free(trace);
        dpsbm_partition_free(out);
        dpsbm_partition_free(truth);
        dpsbm_graph_free(g);
    }
}

#[test]
fn concentration_on_planted_truth() {
    let params = r#"{"variant": "basbm", "n": 300, "a": 30, "b": 2, "rho": 0.5}"#;
    let (g, truth) = generate(params, 5);
    unsafe {
        let mut pass = false;
        let s = dpsbm_check_concentration(g, truth, cstr(params).as_ptr(), 2.0, 2.0, &mut pass);
        assert_eq!(s, DpsbmStatus::Ok, "{}", last_error());
        dpsbm_partition_free(truth);
        dpsbm_graph_free(g);
    }
}

#[test]
fn partition_json_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        let json = cstr(r#"{"kind": "binary", "sigma": [1, -1, 1]}"#);
        assert_eq!(dpsbm_partition_from_json(json.as_ptr(), &mut p), DpsbmStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(dpsbm_partition_to_json(p, &mut text), DpsbmStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(dpsbm_partition_from_json(text, &mut q), DpsbmStatus::Ok);
        let mut same = false;
        dpsbm_partition_equal(p, q, &mut same);
        assert!(same);
        dpsbm_string_free(text);
        dpsbm_partition_free(p);
        dpsbm_partition_free(q);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(dpsbm_generate(ptr::null(), 0, &mut g, ptr::null_mut()), DpsbmStatus::NullPointer);
        assert!(last_error().contains("params_json"));
        assert_eq!(dpsbm_generate(cstr("{").as_ptr(), 0, &mut g, ptr::null_mut()), DpsbmStatus::InvalidArgument);
        let infeasible = cstr(r#"{"variant": "basbm", "n": 10, "a": 30, "b": 2, "rho": 0.5}"#);
        assert_eq!(dpsbm_generate(infeasible.as_ptr(), 0, &mut g, ptr::null_mut()), DpsbmStatus::InvalidArgument);
        assert!(g.is_null());

        assert_eq!(dpsbm_graph_from_edge_list(cstr("n 3 simple\n0 5\n").as_ptr(), &mut g), DpsbmStatus::InvalidArgument);
        assert_eq!(dpsbm_graph_from_edge_list(cstr("garbage").as_ptr(), &mut g), DpsbmStatus::Parse);
        assert_eq!(dpsbm_graph_from_edge_list(cstr("n 3 simple\n0 1\n1 0\n").as_ptr(), &mut g), DpsbmStatus::Parse);

        let mut p = ptr::null_mut();
        assert_eq!(dpsbm_partition_from_json(cstr("[1]").as_ptr(), &mut p), DpsbmStatus::Parse);
        let mut pass = false;
        assert_eq!(
            dpsbm_check_concentration(ptr::null(), ptr::null(), ptr::null(), 1.0, 1.0, &mut pass),
            DpsbmStatus::NullPointer
        );

        assert_eq!(dpsbm_graph_n(ptr::null()), 0);
        dpsbm_graph_free(ptr::null_mut());
        dpsbm_partition_free(ptr::null_mut());
        dpsbm_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(dpsbm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
