//! EPR-like correlation functions of a scaled standard-form state and their
//! closed-form minima.
//!
//! * `E(λ, μ)`: normalized product of the variances of `q1 − λq2` and `p1 + μp2`.
//! * `F(α², u1, u2)`: normalized sum of the variances of `αq1 − q2/α` and `αp1 + p2/α`
//!   over all local squeezings.
//! * `G(ξ, η, u1)`: regularized (unnormalized) sum.
//!
//! For `d < 0` each has a unique stationary point and its minimum is a
//! function of the partially transposed spectrum: `E_m = (κ−^PT)²`,
//! `F_m = 2κ−^PT`, and `G_m` has the sign of `D^PT`.

mod hessian;

pub use hessian::{
    f_hessian_exact, hessian_e, hessian_f, hessian_f_sts_minors, hessian_f_symmetric_minors, hessian_g, HessianCheck,
};

use serde::{Deserialize, Serialize};

use crate::error::{degenerate, Result};
use crate::symplectic::{spectrum, ScalingFactors, StandardFormParams, SymplecticSpectrum};
use crate::tolerances::D_PT_BOUNDARY;

/// Variance of `a1·q1 − a2·q2` in the scaled standard form.
pub fn variance_q_general(p: &StandardFormParams, u: &ScalingFactors, a1: f64, a2: f64) -> f64 {
    a1 * a1 * p.b1 * u.u1 + a2 * a2 * p.b2 * u.u2 - 2.0 * a1 * a2 * p.c * (u.u1 * u.u2).sqrt()
}

/// Variance of `β1·p1 ± β2·p2` in the scaled standard form; `sign` is `+1.0` or `-1.0`.
pub fn variance_p_general(p: &StandardFormParams, u: &ScalingFactors, beta1: f64, beta2: f64, sign: f64) -> f64 {
    debug_assert!(sign == 1.0 || sign == -1.0);
    beta1 * beta1 * p.b1 / u.u1 + beta2 * beta2 * p.b2 / u.u2 + sign * 2.0 * beta1 * beta2 * p.d / (u.u1 * u.u2).sqrt()
}

/// `[ΔQ(λ)]² = b1 + b2λ² − 2cλ`.
pub fn variance_q_reid(p: &StandardFormParams, lambda: f64) -> f64 {
    p.b1 + p.b2 * lambda * lambda - 2.0 * p.c * lambda
}

/// `[ΔP(μ)]² = b1 + b2μ² + 2dμ`.
pub fn variance_p_reid(p: &StandardFormParams, mu: f64) -> f64 {
    p.b1 + p.b2 * mu * mu + 2.0 * p.d * mu
}

/// Normalized product `E(λ, μ) = [ΔQ(λ)]²[ΔP(μ)]² / (1 + λμ)²`.
pub fn e_function(p: &StandardFormParams, lambda: f64, mu: f64) -> f64 {
    let norm = 1.0 + lambda * mu;
    variance_q_reid(p, lambda) * variance_p_reid(p, mu) / (norm * norm)
}

/// Analytic gradient of `ln E` with respect to `(λ, μ)`.
pub fn ln_e_gradient(p: &StandardFormParams, lambda: f64, mu: f64) -> [f64; 2] {
    let norm = 1.0 + lambda * mu;
    [
        2.0 * (p.b2 * lambda - p.c) / variance_q_reid(p, lambda) - 2.0 * mu / norm,
        2.0 * (p.b2 * mu + p.d) / variance_p_reid(p, mu) - 2.0 * lambda / norm,
    ]
}

/// Residuals of the stationarity system
/// `[ΔQ]² = (b2λ − c)(1 + λμ)/μ`, `[ΔP]² = (b2μ + d)(1 + λμ)/λ`.
pub fn e_stationarity_residuals(p: &StandardFormParams, lambda: f64, mu: f64) -> [f64; 2] {
    let norm = 1.0 + lambda * mu;
    [
        variance_q_reid(p, lambda) - (p.b2 * lambda - p.c) * norm / mu,
        variance_p_reid(p, mu) - (p.b2 * mu + p.d) * norm / lambda,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EStationary {
    pub e_m: f64,
    pub lambda_m: f64,
    pub mu_m: f64,
}

fn require_d_negative(p: &StandardFormParams, what: &str) -> Result<()> {
    if p.c <= 0.0 {
        return Err(degenerate(format!("{what}: c = 0, the minimum is not attained")));
    }
    if p.d >= 0.0 {
        return Err(degenerate(format!("{what}: d >= 0, separable by Simon's lemma")));
    }
    Ok(())
}

/// Unique minimum point of `E` for `d < 0`, with `E_m = (κ−^PT)²`.
pub fn e_m_closed(p: &StandardFormParams) -> Result<EStationary> {
    require_d_negative(p, "E minimum")?;
    let s = spectrum(p)?;
    let StandardFormParams { b1, b2, c, d } = *p;
    let num = (b1 * b1 - b2 * b2) + s.delta_pt.sqrt();
    Ok(EStationary {
        e_m: s.kappa_minus_pt * s.kappa_minus_pt,
        lambda_m: num / (2.0 * (b1 * c - b2 * d)),
        mu_m: num / (2.0 * (b2 * c - b1 * d)),
    })
}

/// Normalized sum `F(α², u1, u2)` of the variances of `αq1 − q2/α` and `αp1 + p2/α`.
pub fn f_function(p: &StandardFormParams, alpha_sq: f64, u: &ScalingFactors) -> f64 {
    let s = (u.u1 * u.u2).sqrt();
    let a4 = alpha_sq * alpha_sq;
    (p.b1 * (u.u1 + 1.0 / u.u1) * a4 - 2.0 * (p.c * s - p.d / s) * alpha_sq + p.b2 * (u.u2 + 1.0 / u.u2)) / (a4 + 1.0)
}

/// Residuals of the three stationarity conditions of `F`, in the order
/// (`α²` equation, `u1` equation, `u2` equation).
pub fn f_stationarity_residuals(p: &StandardFormParams, alpha_sq: f64, u: &ScalingFactors) -> [f64; 3] {
    let s = (u.u1 * u.u2).sqrt();
    let plus = p.c * s + p.d / s;
    let minus = p.c * s - p.d / s;
    let a4 = alpha_sq * alpha_sq;
    [
        minus * (1.0 - a4) - (p.b1 * (u.u1 + 1.0 / u.u1) - p.b2 * (u.u2 + 1.0 / u.u2)) * alpha_sq,
        p.b1 * (u.u1 - 1.0 / u.u1) * alpha_sq - plus,
        p.b2 * (u.u2 - 1.0 / u.u2) / alpha_sq - plus,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FStationary {
    pub f_m: f64,
    pub alpha_m_sq: f64,
    pub u1m: f64,
    pub u2m: f64,
    /// `u2m / u1m = (b2c − b1d)/(b1c − b2d) ≤ 1`.
    pub gamma: f64,
}

/// Unique minimum point of `F` for `d < 0`, with `F_m = 2κ−^PT`.
///
/// Uses the discriminant form of the scaling factors, which stays finite
/// for squeezed thermal states (`c + d = 0`, where `u1m = u2m = 1`).
pub fn f_m_closed(p: &StandardFormParams) -> Result<FStationary> {
    require_d_negative(p, "F minimum")?;
    let s = spectrum(p)?;
    let StandardFormParams { b1, b2, c, d } = *p;
    let root = s.delta_pt.sqrt();
    let diff = b1 * b1 - b2 * b2;
    let k1 = b1 * c - b2 * d;
    let k2 = b2 * c - b1 * d;
    let u1m = ((b1 * (root - diff) + 2.0 * d * k1) / (b1 * (root - diff) - 2.0 * c * k2)).sqrt();
    let u2m = ((b2 * (root + diff) + 2.0 * d * k2) / (b2 * (root + diff) - 2.0 * c * k1)).sqrt();
    Ok(FStationary {
        f_m: 2.0 * s.kappa_minus_pt,
        alpha_m_sq: ((root - diff) / (root + diff)).sqrt(),
        u1m,
        u2m,
        gamma: k2 / k1,
    })
}

/// Roots `(p+, p−)` and discriminant `Δ_p` of the quadratic satisfied by
/// `p = u1·u2` at the stationary point of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub discriminant: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

impl ProductQuadratic {
    pub fn residual(&self, x: f64) -> f64 {
        self.a * x * x - self.b * x + self.c
    }
}

pub fn f_product_quadratic(p: &StandardFormParams) -> ProductQuadratic {
    let StandardFormParams { b1, b2, c, d } = *p;
    let g = b1 * b2;
    let gamma = (b2 * c - b1 * d) / (b1 * c - b2 * d);
    let qa = g - c * c;
    let qb = g * (gamma + 1.0 / gamma) + 2.0 * c * d;
    let qc = g - d * d;
    let disc = qb * qb - 4.0 * qa * qc;
    let root = disc.max(0.0).sqrt();
    ProductQuadratic {
        a: qa,
        b: qb,
        c: qc,
        discriminant: disc,
        p_plus: (qb + root) / (2.0 * qa),
        p_minus: (qb - root) / (2.0 * qa),
    }
}

/// Regularized sum `G(ξ, η, u1) = [ΔQ(ξ)]² + [ΔP(η)]² − (1 + ξη)`.
pub fn g_function(p: &StandardFormParams, xi: f64, eta: f64, u1: f64) -> f64 {
    let su = u1.sqrt();
    (p.b1 * u1 + p.b2 * xi * xi - 2.0 * p.c * su * xi) + (p.b1 / u1 + p.b2 * eta * eta + 2.0 * p.d * eta / su)
        - (1.0 + xi * eta)
}

/// Residuals of `∂G/∂ξ = 0`, `∂G/∂η = 0`, `∂G/∂u1 = 0` in their linear forms.
pub fn g_stationarity_residuals(p: &StandardFormParams, xi: f64, eta: f64, u1: f64) -> [f64; 3] {
    let su = u1.sqrt();
    [
        2.0 * p.b2 * xi - eta - 2.0 * p.c * su,
        -xi + 2.0 * p.b2 * eta + 2.0 * p.d / su,
        p.c * u1 * xi + p.d * eta - p.b1 * (u1 * u1 - 1.0) / su,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GStationary {
    pub g_m: f64,
    pub xi_m: f64,
    pub eta_m: f64,
    pub u1m: f64,
}

/// The two brackets `b2(b1b2 − c²) − b1/4` and `b2(b1b2 − d²) − b1/4`.
fn g_brackets(p: &StandardFormParams) -> (f64, f64) {
    let g = p.b1 * p.b2;
    (p.b2 * (g - p.c * p.c) - 0.25 * p.b1, p.b2 * (g - p.d * p.d) - 0.25 * p.b1)
}

/// `G_m = 4 D^PT / (2 sqrt(AB) + b2² − 1/4 − cd)`; finite wherever `d < 0`.
pub fn g_m_value(p: &StandardFormParams) -> f64 {
    let (a, b) = g_brackets(p);
    let k = p.b2 * p.b2 - 0.25 - p.c * p.d;
    4.0 * p.simon_d_pt() / (2.0 * (a * b).max(0.0).sqrt() + k)
}

/// `G_m = [2 sqrt(AB) − (b2² − 1/4 − cd)] / (b2² − 1/4)`, the form before
/// the determinant identity is applied.
pub fn g_m_sum_form(p: &StandardFormParams) -> f64 {
    let (a, b) = g_brackets(p);
    let k = p.b2 * p.b2 - 0.25;
    (2.0 * (a * b).max(0.0).sqrt() - (k - p.c * p.d)) / k
}

/// Unique minimum point of `G` for `d < 0` and `b2 > 1/2`.
pub fn g_m_closed(p: &StandardFormParams) -> Result<GStationary> {
    require_d_negative(p, "G minimum")?;
    let k = p.b2 * p.b2 - 0.25;
    if k <= 1e-12 {
        return Err(degenerate("G minimum: b2 = 1/2 forces a product state"));
    }
    let (a, b) = g_brackets(p);
    if a <= 0.0 {
        return Err(degenerate("G minimum: stationary point escapes to u1 -> infinity"));
    }
    let u1m = (b / a).sqrt();
    let su = u1m.sqrt();
    Ok(GStationary {
        g_m: g_m_value(p),
        xi_m: (p.b2 * p.c * su - 0.5 * p.d / su) / k,
        eta_m: (0.5 * p.c * su - p.b2 * p.d / su) / k,
        u1m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Separable,
    Entangled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `d < 0`: the minimization analysis applies.
    DNegative,
    /// `d ≥ 0` with `c > 0`: separable by Simon's lemma.
    DNonNegative,
    /// `c = d = 0`: product of single-mode states.
    Degenerate,
}

impl Branch {
    pub fn of(p: &StandardFormParams) -> Branch {
        if p.d < 0.0 {
            Branch::DNegative
        } else if p.c == 0.0 {
            Branch::Degenerate
        } else {
            Branch::DNonNegative
        }
    }
}

/// `-1`, `0`, `1` with a dead band of half-width `band` around zero.
pub(crate) fn banded_sign(x: f64, band: f64) -> i8 {
    if x > band {
        1
    } else if x < -band {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// `|D^PT|` inside the threshold band; such states count as separable.
    pub boundary: bool,
    /// `E_m − 1/4`, `F_m − 1` and `G_m` agree in sign with `D^PT` (checked for `d < 0`).
    pub indicators_consistent: bool,
}

/// Separable iff `D^PT ≥ 0`.
pub fn classify(p: &StandardFormParams) -> Result<Classification> {
    let s = spectrum(p)?;
    Ok(classify_with(p, &s))
}

fn classify_with(p: &StandardFormParams, s: &SymplecticSpectrum) -> Classification {
    let boundary = s.d_pt.abs() <= D_PT_BOUNDARY;
    let verdict = if s.d_pt >= -D_PT_BOUNDARY { Verdict::Separable } else { Verdict::Entangled };
    let mut consistent = true;
    if p.d < 0.0 {
        let reference = banded_sign(s.d_pt, D_PT_BOUNDARY);
        let e_m = s.kappa_minus_pt * s.kappa_minus_pt;
        let f_m = 2.0 * s.kappa_minus_pt;
        let signs = [banded_sign(e_m - 0.25, 1e-12), banded_sign(f_m - 1.0, 1e-12), banded_sign(g_m_value(p), 1e-10)];
        consistent = signs.iter().all(|&sg| sg == 0 || reference == 0 || sg == reference);
    }
    Classification { verdict, boundary, indicators_consistent: consistent }
}

/// All three indicators with their stationary points, branch and verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub branch: Branch,
    pub e_m: f64,
    /// The closed-form value is attained at a unique stationary point
    /// (only claimed for `d < 0`).
    pub e_attained: bool,
    pub e_stationary: Option<EStationary>,
    pub f_m: f64,
    pub f_stationary: Option<FStationary>,
    /// Defined only for `d < 0`.
    pub g_m: Option<f64>,
    pub g_stationary: Option<GStationary>,
    pub verdict: Verdict,
    pub boundary: bool,
    pub indicators_consistent: bool,
}

pub fn indicator_report(p: &StandardFormParams) -> Result<IndicatorReport> {
    let s = spectrum(p)?;
    let class = classify_with(p, &s);
    let branch = Branch::of(p);
    let negative = branch == Branch::DNegative;
    let e_stationary = if negative { Some(e_m_closed(p)?) } else { None };
    let f_stationary = if negative { Some(f_m_closed(p)?) } else { None };
    let g_stationary = if negative { g_m_closed(p).ok() } else { None };
    let g_m = if negative && p.b2 * p.b2 - 0.25 > 1e-12 { Some(g_m_value(p)) } else { None };
    Ok(IndicatorReport {
        branch,
        e_m: s.kappa_minus_pt * s.kappa_minus_pt,
        e_attained: negative,
        e_stationary,
        f_m: 2.0 * s.kappa_minus_pt,
        f_stationary,
        g_m,
        g_stationary,
        verdict: class.verdict,
        boundary: class.boundary,
        indicators_consistent: class.indicators_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::build_scaled_standard_cm;
    use approx::assert_relative_eq;
    use nalgebra::Vector4;

    fn example() -> StandardFormParams {
        StandardFormParams::new(1.0, 0.8, 0.5, -0.3)
    }

    fn quad_form(p: &StandardFormParams, u: &ScalingFactors, v: Vector4<f64>) -> f64 {
        let cm = build_scaled_standard_cm(p, u);
        (v.transpose() * cm.matrix() * v)[(0, 0)]
    }

    #[test]
    fn general_variances() {
        let u = ScalingFactors::IDENTITY;
        assert_eq!(variance_q_general(&StandardFormParams::VACUUM, &u, 1.0, 1.0), 1.0);
        assert_relative_eq!(variance_q_general(&example(), &u, 1.0, 2.0), 2.2, epsilon = 1e-15);
        assert_eq!(variance_p_general(&StandardFormParams::VACUUM, &u, 1.0, 1.0, 1.0), 1.0);
        let sts = StandardFormParams::new(1.0, 1.0, 0.5, -0.5);
        assert_relative_eq!(variance_p_general(&sts, &u, 1.0, 1.0, 1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn variances_match_quadratic_form() {
        let p = example();
        let u = ScalingFactors::new(1.7, 2.3).unwrap();
        let (a1, a2, b1, b2) = (0.7, 1.9, 1.3, 0.4);
        let q = quad_form(&p, &u, Vector4::new(a1, 0.0, -a2, 0.0));
        assert!((q - variance_q_general(&p, &u, a1, a2)).abs() < 1e-12);
        for sign in [1.0, -1.0] {
            let v = quad_form(&p, &u, Vector4::new(0.0, b1, 0.0, sign * b2));
            assert!((v - variance_p_general(&p, &u, b1, b2, sign)).abs() < 1e-12);
        }
    }

    #[test]
    fn e_function_values() {
        assert_eq!(e_function(&StandardFormParams::VACUUM, 1.0, 1.0), 0.25);
        assert_relative_eq!(e_function(&example(), 1.0, 1.0), 0.24, epsilon = 1e-15);
    }

    #[test]
    fn e_minimum_symmetric() {
        let e = e_m_closed(&StandardFormParams::symmetric(1.0, 0.5, -0.5)).unwrap();
        assert_relative_eq!(e.e_m, 0.25, epsilon = 1e-14);
        assert_relative_eq!(e.lambda_m, 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.mu_m, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn e_minimum_tmsv_and_near_vacuum() {
        let e = e_m_closed(&StandardFormParams::tmsv(0.5)).unwrap();
        assert!((e.e_m - (-2.0f64).exp() / 4.0).abs() < 1e-12);
        let p = StandardFormParams::symmetric(0.6, 0.05, -0.05);
        let e = e_m_closed(&p).unwrap();
        assert_relative_eq!(e.e_m, 0.3025, epsilon = 1e-12);
        assert_eq!(classify(&p).unwrap().verdict, Verdict::Separable);
    }

    #[test]
    fn e_stationary_point_is_stationary() {
        let p = example();
        let e = e_m_closed(&p).unwrap();
        for r in e_stationarity_residuals(&p, e.lambda_m, e.mu_m) {
            assert!(r.abs() < 1e-12);
        }
        for g in ln_e_gradient(&p, e.lambda_m, e.mu_m) {
            assert!(g.abs() < 1e-12);
        }
        assert!((e_function(&p, e.lambda_m, e.mu_m) - e.e_m).abs() < 1e-12);
    }

    #[test]
    fn e_degenerate_branches() {
        assert!(matches!(
            e_m_closed(&StandardFormParams::new(1.0, 0.8, 0.5, 0.3)),
            Err(crate::Error::DegenerateBranch(_))
        ));
        assert!(matches!(
            e_m_closed(&StandardFormParams::new(1.0, 0.8, 0.0, 0.0)),
            Err(crate::Error::DegenerateBranch(_))
        ));
    }

    #[test]
    fn f_function_values() {
        assert_eq!(f_function(&StandardFormParams::VACUUM, 1.0, &ScalingFactors::IDENTITY), 1.0);
        assert_relative_eq!(f_function(&example(), 1.0, &ScalingFactors::IDENTITY), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn f_minimum_sts() {
        let p = StandardFormParams::new(1.0, 0.8, 0.5, -0.5);
        let f = f_m_closed(&p).unwrap();
        assert_relative_eq!(f.u1m, 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.u2m, 1.0, epsilon = 1e-14);
        let delta: f64 = 0.04 + 1.0;
        assert_relative_eq!(f.alpha_m_sq, (delta.sqrt() - 0.2) / 1.0, epsilon = 1e-14);
    }

    #[test]
    fn f_minimum_symmetric() {
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.3);
        let f = f_m_closed(&p).unwrap();
        let u = (0.7f64 / 0.5).sqrt();
        assert_relative_eq!(f.u1m, u, epsilon = 1e-14);
        assert_relative_eq!(f.u2m, u, epsilon = 1e-14);
        assert_relative_eq!(f.alpha_m_sq, 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.f_m, 2.0 * 0.35f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn f_stationary_point_properties() {
        let p = example();
        let f = f_m_closed(&p).unwrap();
        let u = ScalingFactors { u1: f.u1m, u2: f.u2m };
        assert!((f.u2m - f.gamma * f.u1m).abs() < 1e-12);
        let a4 = f.alpha_m_sq * f.alpha_m_sq;
        assert!((a4 * p.b1 * (f.u1m - 1.0 / f.u1m) - p.b2 * (f.u2m - 1.0 / f.u2m)).abs() < 1e-12);
        for r in f_stationarity_residuals(&p, f.alpha_m_sq, &u) {
            assert!(r.abs() < 1e-12);
        }
        assert!((f_function(&p, f.alpha_m_sq, &u) - f.f_m).abs() < 1e-12);
        let q = f_product_quadratic(&p);
        assert!(q.discriminant >= 0.0 && q.p_plus >= 1.0);
        assert!(q.residual(f.u1m * f.u2m).abs() < 1e-12);
        assert!((q.p_plus - f.u1m * f.u2m).abs() < 1e-12);
        // equal variances of Q(α) and P+(α) at the optimum
        let alpha = f.alpha_m_sq.sqrt();
        let vq = variance_q_general(&p, &u, alpha, 1.0 / alpha);
        let vp = variance_p_general(&p, &u, alpha, 1.0 / alpha, 1.0);
        assert!((vq - vp).abs() < 1e-12);
    }

    #[test]
    fn f_tmsv() {
        let f = f_m_closed(&StandardFormParams::tmsv(0.5)).unwrap();
        assert!((f.f_m - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn g_function_values() {
        assert_eq!(g_function(&StandardFormParams::VACUUM, 1.0, 1.0, 1.0), 0.0);
        let p = StandardFormParams::symmetric(1.0, 0.6, -0.6);
        assert_relative_eq!(g_function(&p, 1.0, 1.0, 1.0), -0.4, epsilon = 1e-14);
    }

    #[test]
    fn g_minimum_values() {
        let threshold = g_m_closed(&StandardFormParams::symmetric(1.0, 0.5, -0.5)).unwrap();
        assert!(threshold.g_m.abs() < 1e-15);
        let p = StandardFormParams::symmetric(1.0, 0.6, -0.6);
        let g = g_m_closed(&p).unwrap();
        assert_relative_eq!(g.g_m, 4.0 * -0.2079 / 1.89, epsilon = 1e-12);
        assert!((g.g_m - g_m_sum_form(&p)).abs() < 1e-12);
        assert!((g_function(&p, g.xi_m, g.eta_m, g.u1m) - g.g_m).abs() < 1e-12);
        for r in g_stationarity_residuals(&p, g.xi_m, g.eta_m, g.u1m) {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn g_degenerate_branches() {
        let p = StandardFormParams::new(0.6, 0.6, 0.0, 0.0);
        assert!(matches!(g_m_closed(&p), Err(crate::Error::DegenerateBranch(_))));
        assert_eq!(classify(&p).unwrap().verdict, Verdict::Separable);
        let r = indicator_report(&p).unwrap();
        assert_eq!(r.branch, Branch::Degenerate);
        assert!(r.g_m.is_none() && r.e_stationary.is_none());
        assert_relative_eq!(r.e_m, 0.36, epsilon = 1e-14);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&StandardFormParams::new(1.0, 0.8, 0.5, 0.3)).unwrap().verdict, Verdict::Separable);
        assert_eq!(classify(&StandardFormParams::tmsv(0.5)).unwrap().verdict, Verdict::Entangled);
        let b = classify(&StandardFormParams::symmetric(1.0, 0.5, -0.5)).unwrap();
        assert_eq!(b.verdict, Verdict::Separable);
        assert!(b.boundary && b.indicators_consistent);
    }

    #[test]
    fn report_is_complete_for_negative_d() {
        let r = indicator_report(&StandardFormParams::tmsv(0.5)).unwrap();
        assert_eq!(r.branch, Branch::DNegative);
        assert!(r.e_stationary.is_some() && r.f_stationary.is_some() && r.g_stationary.is_some());
        assert!(r.g_m.unwrap() < 0.0);
        assert_eq!(r.verdict, Verdict::Entangled);
        assert!(r.indicators_consistent);
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["verdict"], "Entangled");
    }
}
