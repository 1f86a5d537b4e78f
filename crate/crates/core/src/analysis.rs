//! Full pipeline from a covariance matrix to a separability report.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::identities::{identity_residuals, IdentityResiduals};
use crate::indicators::{banded_sign, indicator_report, IndicatorReport, Verdict};
use crate::sfii::{
    classicality_check, indicator_identity_check, solve_standard_form_ii, IdentityCheck, StandardFormIISolution,
};
use crate::symplectic::{
    extract_standard_params, spectrum, standard_params_from_invariants, symplectic_eigenvalues, validate,
    CovarianceMatrix, CovarianceMatrixJson, Ordering, PhysicalityReport, StandardFormParams, SymplecticSpectrum,
};
use crate::tolerances::{rel_diff, Tolerances};

/// One embedded consistency check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CrossCheck {
    fn at_most(name: &str, value: f64, tolerance: f64) -> CrossCheck {
        CrossCheck { name: name.into(), value, tolerance, passed: value <= tolerance }
    }

    fn flag(name: &str, ok: bool) -> CrossCheck {
        CrossCheck { name: name.into(), value: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, passed: ok }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub verdict: Verdict,
    /// `|D^PT|` within the threshold band.
    pub boundary: bool,
    /// `|f̃|` within the threshold band.
    pub f_tilde_boundary: bool,
    pub classical_standard_form_ii: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: CovarianceMatrixJson,
    pub physicality: PhysicalityReport,
    pub params: StandardFormParams,
    pub spectrum: SymplecticSpectrum,
    pub indicators: IndicatorReport,
    pub standard_form_ii: StandardFormIISolution,
    pub identity: IdentityCheck,
    pub identities: IdentityResiduals,
    pub summary: VerdictSummary,
    pub checks: Vec<CrossCheck>,
}

impl AnalysisReport {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Why a matrix could not be analyzed.
#[derive(Debug)]
pub enum AnalysisFailure {
    /// Parsed but not a physical state; the report says which condition failed.
    Unphysical(PhysicalityReport),
    Error(crate::Error),
}

impl From<crate::Error> for AnalysisFailure {
    fn from(e: crate::Error) -> Self {
        AnalysisFailure::Error(e)
    }
}

impl AnalysisFailure {
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisFailure::Unphysical(_) => 1,
            AnalysisFailure::Error(e) => e.exit_code(),
        }
    }
}

/// Analysis starting from standard-form parameters (no extraction step).
pub fn analyze_params(
    p: &StandardFormParams,
    tol: &Tolerances,
) -> std::result::Result<AnalysisReport, AnalysisFailure> {
    p.check(tol.eps_phys).map_err(AnalysisFailure::Error)?;
    let cm = crate::symplectic::build_standard_cm(p);
    analyze(&cm, Ordering::default(), tol)
}

pub fn analyze(
    cm: &CovarianceMatrix,
    ordering: Ordering,
    tol: &Tolerances,
) -> std::result::Result<AnalysisReport, AnalysisFailure> {
    let physicality = validate(cm, tol.eps_phys)?;
    if !(physicality.positive_definite && physicality.rs_satisfied) {
        return Err(AnalysisFailure::Unphysical(physicality));
    }
    let cm = CovarianceMatrix::new(cm.symmetrized());
    let params = extract_standard_params(&cm)?;
    let spec = spectrum(&params)?;
    let indicators = indicator_report(&params)?;
    let sol = solve_standard_form_ii(&params)?;
    let classical = classicality_check(&params, &sol)?;
    let identity = indicator_identity_check(&params, &sol);
    let identities = identity_residuals(&params)?;

    let mut checks = Vec::new();
    let (kp, km) = symplectic_eigenvalues(&cm)?;
    checks.push(CrossCheck::at_most(
        "spectrum_matrix_vs_closed_form",
        rel_diff(kp, spec.kappa_plus, 1.0).max(rel_diff(km, spec.kappa_minus, 1.0)),
        tol.closed_vs_oracle,
    ));
    let det_c = cm.block_c().determinant();
    if let Ok(alt) = standard_params_from_invariants(params.b1, params.b2, det_c, cm.matrix().determinant()) {
        let worst = [(alt.c, params.c), (alt.d, params.d)]
            .iter()
            .map(|&(a, b)| (a - b).abs() / params.b1.max(1.0))
            .fold(0.0, f64::max);
        // the quadratic route loses digits when c ≈ |d|
        checks.push(CrossCheck::at_most("params_svd_vs_invariants", worst, tol.closed_vs_oracle));
    }
    checks.push(CrossCheck::at_most("standard_form_ii_eq1", sol.residual_eq1, tol.identity));
    checks.push(CrossCheck::at_most("standard_form_ii_eq3", sol.residual_eq3, tol.identity));
    checks.push(CrossCheck::at_most("twin_formulas", sol.twin_discrepancy(), tol.identity));
    checks.push(CrossCheck::at_most(
        "indicator_identity",
        identity.residual / (tol.identity * identity.lhs.abs() + 1e-12),
        1.0,
    ));
    checks.push(CrossCheck::at_most("z_forms", identity.z_residual / (1.0 + identity.lhs.abs()), tol.identity));
    checks.push(CrossCheck::at_most("pt_identities", identities.max(), tol.identity));
    checks.push(CrossCheck::flag("indicator_signs_agree", indicators.indicators_consistent));
    let f_sign = banded_sign(sol.f_tilde, tol.f_tilde_boundary);
    let d_sign = banded_sign(spec.d_pt, tol.f_tilde_boundary);
    let f_agrees = if params.d < 0.0 { f_sign == 0 || d_sign == 0 || f_sign == d_sign } else { f_sign >= 0 };
    checks.push(CrossCheck::flag("f_tilde_sign_agrees", f_agrees));
    checks.push(CrossCheck::flag("classicality_matches_f_tilde", classical == (sol.f_tilde >= -tol.f_tilde_boundary)));

    let summary = VerdictSummary {
        verdict: indicators.verdict,
        boundary: indicators.boundary,
        f_tilde_boundary: sol.f_tilde.abs() <= tol.f_tilde_boundary,
        classical_standard_form_ii: classical,
    };
    Ok(AnalysisReport {
        input: cm.to_json(ordering),
        physicality,
        params,
        spectrum: spec,
        indicators,
        standard_form_ii: sol,
        identity,
        identities,
        summary,
        checks,
    })
}

/// Parses the covariance-matrix JSON document.
pub fn parse_cm_json(text: &str) -> Result<(CovarianceMatrix, Ordering)> {
    let doc: CovarianceMatrixJson =
        serde_json::from_str(text).map_err(|e| invalid(format!("malformed covariance matrix JSON: {e}")))?;
    Ok((CovarianceMatrix::from_json(&doc), doc.ordering))
}
