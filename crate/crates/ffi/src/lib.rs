//! C ABI for `tmgs-core`.
//!
//! A state is built once from a covariance matrix or standard-form parameters;
//! construction runs the full analysis, and the accessors copy results out.
//! Every entry point returns a [`TmgsStatus`]. On failure the message is
//! available from [`tmgs_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tmgs::analysis::{analyze, AnalysisFailure, AnalysisReport};
use tmgs::indicators::Verdict;
use tmgs::symplectic::{build_standard_cm, CovarianceMatrix, Ordering, StandardFormParams};
use tmgs::tolerances::Tolerances;
use tmgs::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmgsStatus {
    Ok = 0,
    InvalidInput = 1,
    NumericalFailure = 2,
    DegenerateBranch = 3,
    /// Finite, symmetric input that is not a quantum state.
    Unphysical = 4,
    NullPointer = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmgsOrdering {
    Q1P1Q2P2 = 0,
    Q1Q2P1P2 = 1,
}

impl From<TmgsOrdering> for Ordering {
    fn from(o: TmgsOrdering) -> Self {
        match o {
            TmgsOrdering::Q1P1Q2P2 => Ordering::Q1P1Q2P2,
            TmgsOrdering::Q1Q2P1P2 => Ordering::Q1Q2P1P2,
        }
    }
}

/// Opaque analyzed state.
pub struct TmgsState {
    report: AnalysisReport,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TmgsParams {
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
    pub d: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TmgsSpectrum {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub kappa_plus_pt: f64,
    pub kappa_minus_pt: f64,
    pub det_v: f64,
    pub d: f64,
    pub d_pt: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TmgsIndicators {
    pub e_m: f64,
    pub f_m: f64,
    /// Valid only when `has_g_m` is nonzero.
    pub g_m: f64,
    pub has_g_m: i32,
    pub f_tilde: f64,
    pub u1_tilde: f64,
    pub u2_tilde: f64,
    /// 1 when the PPT test detects entanglement.
    pub entangled: i32,
    /// 1 when every embedded cross-check passed.
    pub checks_passed: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: TmgsStatus, msg: impl Into<String>) -> TmgsStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> TmgsStatus {
    let status = match e {
        Error::InvalidInput(_) => TmgsStatus::InvalidInput,
        Error::NumericalFailure(_) => TmgsStatus::NumericalFailure,
        Error::DegenerateBranch(_) => TmgsStatus::DegenerateBranch,
    };
    fail(status, e.to_string())
}

fn guarded(body: impl FnOnce() -> TmgsStatus) -> TmgsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(TmgsStatus::Internal, "panic inside tmgs"))
}

fn build(cm: &CovarianceMatrix, ordering: Ordering, out: *mut *mut TmgsState) -> TmgsStatus {
    match analyze(cm, ordering, &Tolerances::default()) {
        Ok(report) => {
            // SAFETY: caller checked `out` is non-null.
            unsafe { *out = Box::into_raw(Box::new(TmgsState { report })) };
            TmgsStatus::Ok
        }
        Err(AnalysisFailure::Unphysical(r)) => fail(
            TmgsStatus::Unphysical,
            format!(
                "not a physical state (positive definite: {}, uncertainty relation: {})",
                r.positive_definite, r.rs_satisfied
            ),
        ),
        Err(AnalysisFailure::Error(e)) => from_error(e),
    }
}

/// Analyzes a 4×4 row-major covariance matrix (16 doubles).
///
/// # Safety
/// `matrix` must point to 16 readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_from_matrix(
    matrix: *const f64,
    ordering: TmgsOrdering,
    out: *mut *mut TmgsState,
) -> TmgsStatus {
    guarded(|| {
        if matrix.is_null() || out.is_null() {
            return fail(TmgsStatus::NullPointer, "null pointer argument");
        }
        *out = ptr::null_mut();
        let flat = std::slice::from_raw_parts(matrix, 16);
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row.copy_from_slice(&flat[4 * i..4 * i + 4]);
        }
        let ordering = Ordering::from(ordering);
        build(&CovarianceMatrix::from_rows(rows, ordering), ordering, out)
    })
}

/// Analyzes the standard-form state with the given parameters.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_from_params(params: TmgsParams, out: *mut *mut TmgsState) -> TmgsStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TmgsStatus::NullPointer, "null pointer argument");
        }
        *out = ptr::null_mut();
        let p = StandardFormParams::new(params.b1, params.b2, params.c, params.d);
        if let Err(e) = p.check(Tolerances::default().eps_phys) {
            return from_error(e);
        }
        build(&build_standard_cm(&p), Ordering::default(), out)
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_free(state: *mut TmgsState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Shared accessor plumbing: null checks, panic guard.
unsafe fn read<T>(state: *const TmgsState, out: *mut T, f: impl FnOnce(&AnalysisReport) -> T) -> TmgsStatus {
    guarded(|| {
        if state.is_null() || out.is_null() {
            return fail(TmgsStatus::NullPointer, "null pointer argument");
        }
        *out = f(&(*state).report);
        TmgsStatus::Ok
    })
}

/// Standard-form parameters extracted from the input.
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_params(state: *const TmgsState, out: *mut TmgsParams) -> TmgsStatus {
    read(state, out, |r| TmgsParams { b1: r.params.b1, b2: r.params.b2, c: r.params.c, d: r.params.d })
}

/// Symplectic spectra of the state and of its partial transpose.
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_spectrum(state: *const TmgsState, out: *mut TmgsSpectrum) -> TmgsStatus {
    read(state, out, |r| {
        let s = &r.spectrum;
        TmgsSpectrum {
            kappa_plus: s.kappa_plus,
            kappa_minus: s.kappa_minus,
            kappa_plus_pt: s.kappa_plus_pt,
            kappa_minus_pt: s.kappa_minus_pt,
            det_v: s.det_v,
            d: s.d_inv,
            d_pt: s.d_pt,
        }
    })
}

/// Minimized indicators and the verdict.
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_indicators(state: *const TmgsState, out: *mut TmgsIndicators) -> TmgsStatus {
    read(state, out, |r| TmgsIndicators {
        e_m: r.indicators.e_m,
        f_m: r.indicators.f_m,
        g_m: r.indicators.g_m.unwrap_or(f64::NAN),
        has_g_m: r.indicators.g_m.is_some() as i32,
        f_tilde: r.standard_form_ii.f_tilde,
        u1_tilde: r.standard_form_ii.u1_tilde,
        u2_tilde: r.standard_form_ii.u2_tilde,
        entangled: (r.summary.verdict == Verdict::Entangled) as i32,
        checks_passed: r.all_checks_passed() as i32,
    })
}

/// Full report as a JSON string; release it with [`tmgs_string_free`].
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tmgs_state_report_json(state: *const TmgsState, out: *mut *mut c_char) -> TmgsStatus {
    guarded(|| {
        if state.is_null() || out.is_null() {
            return fail(TmgsStatus::NullPointer, "null pointer argument");
        }
        *out = ptr::null_mut();
        match serde_json::to_string(&(*state).report) {
            Ok(s) => {
                *out = CString::new(s).expect("JSON has no NULs").into_raw();
                TmgsStatus::Ok
            }
            Err(e) => fail(TmgsStatus::Internal, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tmgs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tmgs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_are_stable() {
        assert_eq!(TmgsStatus::Ok as i32, 0);
        assert_eq!(TmgsStatus::InvalidInput as i32, 1);
        assert_eq!(TmgsStatus::NumericalFailure as i32, 2);
        assert_eq!(TmgsStatus::Internal as i32, 6);
    }

    #[test]
    fn error_slot_is_cleared_by_next_call() {
        let mut s = ptr::null_mut();
        unsafe {
            assert_eq!(
                tmgs_state_from_params(TmgsParams { b1: 0.1, b2: 0.1, c: 0.0, d: 0.0 }, &mut s),
                TmgsStatus::InvalidInput
            );
            assert!(!tmgs_last_error().is_null());
            let ok = TmgsParams { b1: 1.0, b2: 1.0, c: 0.0, d: 0.0 };
            assert_eq!(tmgs_state_from_params(ok, &mut s), TmgsStatus::Ok);
            assert!(tmgs_last_error().is_null());
            tmgs_state_free(s);
        }
    }
}
