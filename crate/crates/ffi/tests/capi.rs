use std::ffi::CStr;
use std::ptr;

use tmgs_ffi::*;

fn last_error() -> String {
    let p = tmgs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn tmsv_round_trip() {
    let (ch, sh) = (1.0f64.cosh() / 2.0, 1.0f64.sinh() / 2.0);
    let m = [ch, 0.0, sh, 0.0, 0.0, ch, 0.0, -sh, sh, 0.0, ch, 0.0, 0.0, -sh, 0.0, ch];
    let mut state = ptr::null_mut();
    unsafe {
        assert_eq!(tmgs_state_from_matrix(m.as_ptr(), TmgsOrdering::Q1P1Q2P2, &mut state), TmgsStatus::Ok);
        let mut ind = TmgsIndicators::default();
        assert_eq!(tmgs_state_indicators(state, &mut ind), TmgsStatus::Ok);
        assert_eq!(ind.entangled, 1);
        assert_eq!(ind.checks_passed, 1);
        assert!((ind.f_m - (-1.0f64).exp()).abs() < 1e-9);
        let mut spectrum = TmgsSpectrum::default();
        assert_eq!(tmgs_state_spectrum(state, &mut spectrum), TmgsStatus::Ok);
        assert!((spectrum.kappa_minus_pt - (-1.0f64).exp() / 2.0).abs() < 1e-12);
        let mut params = TmgsParams::default();
        assert_eq!(tmgs_state_params(state, &mut params), TmgsStatus::Ok);
        assert!((params.c + params.d).abs() < 1e-12);
        tmgs_state_free(state);
    }
}

#[test]
fn other_ordering_gives_same_state() {
    // q1 q2 p1 p2 rows of the standard form {1.2, 0.9, 0.4, -0.3}
    let m = [1.2, 0.4, 0.0, 0.0, 0.4, 0.9, 0.0, 0.0, 0.0, 0.0, 1.2, -0.3, 0.0, 0.0, -0.3, 0.9];
    let mut state = ptr::null_mut();
    unsafe {
        assert_eq!(tmgs_state_from_matrix(m.as_ptr(), TmgsOrdering::Q1Q2P1P2, &mut state), TmgsStatus::Ok);
        let mut p = TmgsParams::default();
        tmgs_state_params(state, &mut p);
        assert!((p.b1 - 1.2).abs() < 1e-12 && (p.c - 0.4).abs() < 1e-12 && (p.d + 0.3).abs() < 1e-12);
        tmgs_state_free(state);
    }
}

#[test]
fn report_json() {
    let mut state = ptr::null_mut();
    unsafe {
        let p = TmgsParams { b1: 1.0, b2: 1.0, c: 0.0, d: 0.0 };
        assert_eq!(tmgs_state_from_params(p, &mut state), TmgsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(tmgs_state_report_json(state, &mut s), TmgsStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        tmgs_string_free(s);
        tmgs_state_free(state);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["summary"]["verdict"], "Separable");
    }
}

#[test]
fn errors_are_reported() {
    let mut state = ptr::null_mut();
    unsafe {
        let bad = [0.3, 0.0, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5];
        assert_eq!(tmgs_state_from_matrix(bad.as_ptr(), TmgsOrdering::Q1P1Q2P2, &mut state), TmgsStatus::Unphysical);
        assert!(state.is_null());
        assert!(last_error().contains("physical"));

        let nan = [f64::NAN; 16];
        assert_eq!(tmgs_state_from_matrix(nan.as_ptr(), TmgsOrdering::Q1P1Q2P2, &mut state), TmgsStatus::InvalidInput);

        assert_eq!(tmgs_state_from_matrix(ptr::null(), TmgsOrdering::Q1P1Q2P2, &mut state), TmgsStatus::NullPointer);
        let mut ind = TmgsIndicators::default();
        assert_eq!(tmgs_state_indicators(ptr::null(), &mut ind), TmgsStatus::NullPointer);
        tmgs_state_free(ptr::null_mut());
        tmgs_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tmgs.h")).unwrap();
    for name in [
        "tmgs_state_from_matrix",
        "tmgs_state_free",
        "tmgs_last_error",
        "TMGS_STATUS_OK",
        "typedef struct TmgsState TmgsState",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
