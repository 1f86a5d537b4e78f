//! Standard form II: the local scaling `(ũ1, ũ2)` at which separability of the
//! state reduces to classicality of its covariance matrix, and the resulting
//! indicator `f̃`.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{degenerate, invalid, numerical, Result};
use crate::symplectic::{build_scaled_standard_cm, ScalingFactors, StandardFormParams};

const SCAN_POINTS: usize = 2048;
const MAX_BISECTIONS: usize = 200;
const CLASSICALITY_SLACK: f64 = 1e-9;

/// `K(α², u1, u2)`: sum of the two EPR-like variances minus their lower bound
/// `α² + 1/α²`. Non-negative for every separable state.
pub fn k_function(p: &StandardFormParams, alpha_sq: f64, u: &ScalingFactors) -> f64 {
    let s = (u.u1 * u.u2).sqrt();
    alpha_sq * (p.b1 * (u.u1 + 1.0 / u.u1) - 1.0) + (p.b2 * (u.u2 + 1.0 / u.u2) - 1.0) / alpha_sq
        - 2.0 * (p.c * s + p.d.abs() / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuuValue {
    pub value: f64,
    pub alpha_m_sq: f64,
}

/// `f(u1, u2) = min over α² of K`, with the minimizing `α²`.
pub fn f_uu(p: &StandardFormParams, u: &ScalingFactors) -> Result<FuuValue> {
    let b1 = p.b1 * (u.u1 + 1.0 / u.u1) - 1.0;
    let b2 = p.b2 * (u.u2 + 1.0 / u.u2) - 1.0;
    let s = (u.u1 * u.u2).sqrt();
    let tail = 2.0 * (p.c * s + p.d.abs() / s);
    match (b1 == 0.0, b2 == 0.0) {
        // K no longer depends on α².
        (true, true) => Ok(FuuValue { value: -tail, alpha_m_sq: 1.0 }),
        (false, false) => Ok(FuuValue { value: 2.0 * (b1 * b2).sqrt() - tail, alpha_m_sq: (b2 / b1).sqrt() }),
        _ => Err(degenerate("f(u1, u2): one local bracket vanishes, the minimum over alpha is not attained")),
    }
}

/// `Δ1(u1) = b1²(u1² − 1)² + 4b2²u1(2b1 − u1)(2b1u1 − 1)`.
fn delta1(p: &StandardFormParams, u1: f64) -> f64 {
    let b1 = p.b1;
    let b2 = p.b2;
    b1 * b1 * (u1 * u1 - 1.0).powi(2) + 4.0 * b2 * b2 * u1 * (2.0 * b1 - u1) * (2.0 * b1 * u1 - 1.0)
}

fn h_unchecked(p: &StandardFormParams, u1: f64) -> f64 {
    let b1 = p.b1;
    2.0 * p.b2 * u1 * (2.0 * b1 * u1 - 1.0) / (b1 * (u1 * u1 - 1.0) + delta1(p, u1).max(0.0).sqrt())
}

/// The increasing bijection `[1, 2b1] → [1, 2b2]` solving the first
/// standard-form-II equation for `u2`.
pub fn h_map(p: &StandardFormParams, u1: f64) -> Result<f64> {
    let hi = 2.0 * p.b1;
    if !(u1 >= 1.0 && u1 <= hi * (1.0 + 1e-15)) {
        return Err(invalid(format!("h(u1): u1 = {u1} outside [1, {hi}]")));
    }
    Ok(h_unchecked(p, u1.min(hi)))
}

/// `Φ(u1, u2) = b1b2(u1² − 1)(u2² − 1) − (c·u1u2 − |d|)²`.
pub fn phi_big(p: &StandardFormParams, u1: f64, u2: f64) -> f64 {
    p.b1 * p.b2 * (u1 * u1 - 1.0) * (u2 * u2 - 1.0) - (p.c * u1 * u2 - p.d.abs()).powi(2)
}

/// `φ(u1) = Φ(u1, h(u1))`, whose root in `[1, 2b1]` gives `ũ1`.
pub fn phi(p: &StandardFormParams, u1: f64) -> Result<f64> {
    Ok(phi_big(p, u1, h_map(p, u1)?))
}

/// Closed form of `φ(2b1)`.
pub fn phi_upper_closed(p: &StandardFormParams) -> f64 {
    let StandardFormParams { b1, b2, c, d } = *p;
    let g = b1 * b2;
    16.0 * g * (p.simon_d() + d * d * (g - c * c - 0.25) + 0.5 * c * (d.abs() + d)) + 4.0 * d * d * (g - 0.25)
}

/// Relative residual `|x − y| / max(1, |x| + |y|)`.
fn rel_residual(x: f64, y: f64) -> f64 {
    (x - y).abs() / (x.abs() + y.abs()).max(1.0)
}

/// Relative residual of `(b1/u1 − ½)/(b1u1 − ½) = (b2/u2 − ½)/(b2u2 − ½)`,
/// evaluated cross-multiplied.
pub fn eq1_residual(p: &StandardFormParams, u1: f64, u2: f64) -> f64 {
    rel_residual((p.b1 / u1 - 0.5) * (p.b2 * u2 - 0.5), (p.b2 / u2 - 0.5) * (p.b1 * u1 - 0.5))
}

/// Relative residual of `b1b2(u1² − 1)(u2² − 1) = (c·u1u2 − |d|)²`.
pub fn eq3_residual(p: &StandardFormParams, u1: f64, u2: f64) -> f64 {
    rel_residual(p.b1 * p.b2 * (u1 * u1 - 1.0) * (u2 * u2 - 1.0), (p.c * u1 * u2 - p.d.abs()).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    /// `c = |d|`: thermal, mode-mixed thermal and squeezed thermal states.
    EqualCorrelations,
    /// `b1 = b2`, `c > |d|`.
    Symmetric,
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardFormIISolution {
    pub u1_tilde: f64,
    pub u2_tilde: f64,
    pub f_tilde: f64,
    /// `f̃` from the second twin expression.
    pub f_tilde_twin: f64,
    pub f_tilde_prime: f64,
    pub f_tilde_double_prime: f64,
    /// Absent when one local bracket of `K` vanishes.
    pub alpha_tilde_m_sq: Option<f64>,
    pub method: SolveMethod,
    pub root_iterations: usize,
    /// Every sign change of `φ` found on the scan grid.
    pub brackets: Vec<(f64, f64)>,
    pub residual_eq1: f64,
    pub residual_eq3: f64,
}

impl StandardFormIISolution {
    pub fn scaling(&self) -> ScalingFactors {
        ScalingFactors { u1: self.u1_tilde, u2: self.u2_tilde }
    }

    pub fn twin_discrepancy(&self) -> f64 {
        (self.f_tilde - self.f_tilde_twin).abs()
    }
}

fn populate(
    p: &StandardFormParams,
    u1: f64,
    u2: f64,
    method: SolveMethod,
    root_iterations: usize,
    brackets: Vec<(f64, f64)>,
) -> StandardFormIISolution {
    let StandardFormParams { b1, b2, c, d } = *p;
    let s = (u1 * u2).sqrt();
    let up = ((b1 * u1 - 0.5) * (b2 * u2 - 0.5)).max(0.0).sqrt();
    let down = ((b1 / u1 - 0.5) * (b2 / u2 - 0.5)).max(0.0).sqrt();
    let alpha = f_uu(p, &ScalingFactors { u1, u2 }).ok().map(|v| v.alpha_m_sq);
    StandardFormIISolution {
        u1_tilde: u1,
        u2_tilde: u2,
        f_tilde: 4.0 * (up - c * s),
        f_tilde_twin: 4.0 * (down - d.abs() / s),
        f_tilde_prime: 4.0 * (up + c * s),
        f_tilde_double_prime: 4.0 * (down + d.abs() / s),
        alpha_tilde_m_sq: alpha,
        method,
        root_iterations,
        brackets,
        residual_eq1: eq1_residual(p, u1, u2),
        residual_eq3: eq3_residual(p, u1, u2),
    }
}

/// Solves the standard-form-II system for `(ũ1, ũ2)` in `[1, 2b1] × [1, 2b2]`.
///
/// Closed forms are used for `c = |d|` and for symmetric states. Otherwise
/// `φ` is scanned on a uniform grid, the first sign change is bisected and
/// the root polished with one secant step.
pub fn solve_standard_form_ii(p: &StandardFormParams) -> Result<StandardFormIISolution> {
    let StandardFormParams { b1, b2, c, d } = *p;
    if c == d.abs() {
        return Ok(populate(p, 1.0, 1.0, SolveMethod::EqualCorrelations, 0, Vec::new()));
    }
    if b1 == b2 && c > d.abs() {
        let u = ((b1 - d.abs()) / (b1 - c)).sqrt();
        return Ok(populate(p, u, u, SolveMethod::Symmetric, 0, Vec::new()));
    }
    solve_by_bisection(p)
}

/// The scan-and-bisect path on its own, without the closed-form shortcuts.
pub fn solve_by_bisection(p: &StandardFormParams) -> Result<StandardFormIISolution> {
    let lo = 1.0;
    let hi = 2.0 * p.b1;
    let upper = phi(p, hi)?;
    if upper < -1e-9 {
        return Err(numerical(format!("phi(2 b1) = {upper:e} < 0: input is not a physical state")));
    }

    let step = (hi - lo) / SCAN_POINTS as f64;
    let grid: Vec<f64> = (0..=SCAN_POINTS).map(|i| if i == SCAN_POINTS { hi } else { lo + step * i as f64 }).collect();
    let values: Vec<f64> = grid.iter().map(|&x| phi_big(p, x, h_unchecked(p, x))).collect();
    let mut brackets = Vec::new();
    for i in 0..SCAN_POINTS {
        let (fa, fb) = (values[i], values[i + 1]);
        if (fa <= 0.0 && fb > 0.0) || (fa >= 0.0 && fb < 0.0) {
            brackets.push((grid[i], grid[i + 1]));
        }
    }

    let Some(&(mut a, mut b)) = brackets.first() else {
        // Only reachable when φ(2b1) sits at zero within rounding.
        if upper.abs() <= 1e-9 {
            return Ok(populate(p, hi, h_unchecked(p, hi), SolveMethod::Bisection, 0, brackets));
        }
        return Err(numerical("no sign change of phi on [1, 2 b1]"));
    };

    let f = |x: f64| phi_big(p, x, h_unchecked(p, x));
    let mut fa = f(a);
    let mut fb = f(b);
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && b - a > 1e-12 * b.max(1.0) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        iterations += 1;
        if fm == 0.0 {
            a = m;
            b = m;
            fa = 0.0;
            fb = 0.0;
            break;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    let mut root = if fa.abs() <= fb.abs() { a } else { b };
    if fb != fa {
        let secant = b - fb * (b - a) / (fb - fa);
        if secant >= a && secant <= b && f(secant).abs() < f(root).abs() {
            root = secant;
        }
    }
    Ok(populate(p, root, h_unchecked(p, root), SolveMethod::Bisection, iterations, brackets))
}

/// The unique scaling at `f̃ = 0` (physicality edge for `d ≥ 0`, separability
/// threshold for `d < 0`).
pub fn boundary_scaling_closed(p: &StandardFormParams) -> Result<(f64, f64)> {
    let StandardFormParams { b1, b2, c, d } = *p;
    let ad = d.abs();
    if c == 0.0 {
        return Err(degenerate("f = 0 scaling needs c > 0"));
    }
    let num = 2.0 * (c * (b1 * b2 - d * d) + 0.25 * ad);
    Ok((num / (b1 * ad + b2 * c), num / (b1 * c + b2 * ad)))
}

/// Direct test of `V(ũ1, ũ2) − I/2 ⪰ 0`, cross-checked against `f̃ ≥ 0`.
pub fn classicality_check(p: &StandardFormParams, sol: &StandardFormIISolution) -> Result<bool> {
    let cm = build_scaled_standard_cm(p, &sol.scaling());
    let shifted = cm.matrix() - Matrix4::identity() * 0.5;
    let min_eig = SymmetricEigen::new(shifted).eigenvalues.min();
    let by_eigen = min_eig >= -CLASSICALITY_SLACK;
    let contradiction = (min_eig < -CLASSICALITY_SLACK && sol.f_tilde > CLASSICALITY_SLACK)
        || (min_eig > CLASSICALITY_SLACK && sol.f_tilde < -CLASSICALITY_SLACK);
    if contradiction {
        return Err(numerical(format!("classicality mismatch: min eigenvalue {min_eig:e}, f_tilde {:e}", sol.f_tilde)));
    }
    Ok(by_eigen)
}

/// `H(d)·D + H(−d)·D^PT = det V − (b1² + b2² + 2c|d|)/4 + 1/16`.
pub fn heaviside_invariant(p: &StandardFormParams) -> f64 {
    let StandardFormParams { b1, b2, c, d } = *p;
    p.det_v() - 0.25 * (b1 * b1 + b2 * b2 + 2.0 * c * d.abs()) + 1.0 / 16.0
}

/// `Z(u1, u2)` from its defining product form.
pub fn z_direct(p: &StandardFormParams, u1: f64, u2: f64) -> f64 {
    let StandardFormParams { b1, b2, c, d } = *p;
    let uu = u1 * u2;
    let q_minus = (b1 * u1 - 0.5) * (b2 * u2 - 0.5) - c * c * uu;
    let q_plus = (b1 * u1 + 0.5) * (b2 * u2 + 0.5) - c * c * uu;
    let p_plus = (b1 / u1 + 0.5) * (b2 / u2 + 0.5) - d * d / uu;
    let p_minus = (b1 / u1 - 0.5) * (b2 / u2 - 0.5) - d * d / uu;
    0.5 * (q_minus * p_plus + q_plus * p_minus)
}

/// `Z(u1, u2)` in its reduced form `H(d)D + H(−d)D^PT + Φ/(4u1u2)`.
pub fn z_reduced(p: &StandardFormParams, u1: f64, u2: f64) -> f64 {
    heaviside_invariant(p) + phi_big(p, u1, u2) / (4.0 * u1 * u2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `|Z_direct − Z_reduced|` at `(ũ1, ũ2)`.
    pub z_residual: f64,
}

/// Both sides of the identity linking `H(d)D + H(−d)D^PT` to `f̃`.
pub fn indicator_identity_check(p: &StandardFormParams, sol: &StandardFormIISolution) -> IdentityCheck {
    let StandardFormParams { b1, b2, c, d } = *p;
    let (u1, u2) = (sol.u1_tilde, sol.u2_tilde);
    let uu = u1 * u2;
    let lhs = heaviside_invariant(p);
    let rhs = sol.f_tilde / 32.0
        * (sol.f_tilde_prime * ((b1 / u1 + 0.5) * (b2 / u2 + 0.5) - d * d / uu)
            + sol.f_tilde_double_prime * ((b1 * u1 + 0.5) * (b2 * u2 + 0.5) - c * c * uu));
    IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        z_residual: (z_direct(p, u1, u2) - z_reduced(p, u1, u2)).abs(),
    }
}

pub fn indicator_identity_residual(p: &StandardFormParams, sol: &StandardFormIISolution) -> f64 {
    indicator_identity_check(p, sol).residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn generic() -> StandardFormParams {
        StandardFormParams::new(1.6, 1.1, 0.7, -0.3)
    }

    #[test]
    fn k_values() {
        assert_eq!(k_function(&StandardFormParams::VACUUM, 1.0, &ScalingFactors::IDENTITY), 0.0);
        let p = StandardFormParams::symmetric(1.0, 0.6, -0.6);
        assert_relative_eq!(k_function(&p, 1.0, &ScalingFactors::IDENTITY), -0.4, epsilon = 1e-14);
    }

    #[test]
    fn f_uu_values() {
        let v = f_uu(&StandardFormParams::VACUUM, &ScalingFactors::IDENTITY).unwrap();
        assert_eq!((v.value, v.alpha_m_sq), (0.0, 1.0));
        let p = generic();
        let v = f_uu(&p, &ScalingFactors::IDENTITY).unwrap();
        let expect = 2.0 * ((2.0 * 1.6 - 1.0) * (2.0 * 1.1 - 1.0f64)).sqrt() - 2.0;
        assert_relative_eq!(v.value, expect, epsilon = 1e-14);
        let u = ScalingFactors::new(1.3, 1.7).unwrap();
        let v = f_uu(&p, &u).unwrap();
        assert!((k_function(&p, v.alpha_m_sq, &u) - v.value).abs() < 1e-13);
        for t in [0.5, 0.9, 1.1, 2.0] {
            assert!(k_function(&p, v.alpha_m_sq * t, &u) > v.value);
        }
        let edge = StandardFormParams::new(1.0, 0.5, 0.0, 0.0);
        assert!(matches!(f_uu(&edge, &ScalingFactors::IDENTITY), Err(crate::Error::DegenerateBranch(_))));
    }

    #[test]
    fn f_uu_symmetric_reduces() {
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.3);
        let u = (0.7f64 / 0.5).sqrt();
        let v = f_uu(&p, &ScalingFactors { u1: u, u2: u }).unwrap();
        assert_relative_eq!(v.value, 4.0 * ((0.5f64 * 0.7).sqrt() - 0.5), epsilon = 1e-13);
    }

    #[test]
    fn h_endpoints_and_monotonic() {
        let p = generic();
        assert_relative_eq!(h_map(&p, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(h_map(&p, 3.2).unwrap(), 2.2, epsilon = 1e-14);
        let mut prev = 0.0;
        for i in 0..=200 {
            let u1 = 1.0 + 2.2 * i as f64 / 200.0;
            let u2 = h_map(&p, u1).unwrap();
            assert!(u2 > prev);
            assert!(eq1_residual(&p, u1, u2) < 1e-12);
            prev = u2;
        }
        assert!(h_map(&p, 0.9).is_err());
        assert!(h_map(&p, 3.3).is_err());
        let s = StandardFormParams::symmetric(1.4, 0.6, 0.1);
        for u in [1.0, 1.5, 2.7] {
            assert_relative_eq!(h_map(&s, u).unwrap(), u, epsilon = 1e-14);
        }
    }

    #[test]
    fn phi_endpoints() {
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.3);
        assert_relative_eq!(phi(&p, 1.0).unwrap(), -0.04, epsilon = 1e-14);
        assert!((phi(&p, 2.0).unwrap() - phi_upper_closed(&p)).abs() < 1e-10);
        for q in [generic(), StandardFormParams::new(2.0, 0.9, 0.8, 0.4), StandardFormParams::new(2.0, 0.9, 0.8, -0.6)]
        {
            let top = phi(&q, 2.0 * q.b1).unwrap();
            assert!((top - phi_upper_closed(&q)).abs() < 1e-10 * top.abs().max(1.0));
            assert!(top >= 0.0);
        }
        assert_eq!(phi(&StandardFormParams::new(1.0, 0.8, 0.5, -0.5), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn solve_special_families() {
        let s = solve_standard_form_ii(&StandardFormParams::new(1.0, 0.8, 0.5, -0.5)).unwrap();
        assert_eq!((s.u1_tilde, s.u2_tilde), (1.0, 1.0));
        assert_relative_eq!(s.f_tilde, 4.0 * ((0.5f64 * 0.3).sqrt() - 0.5), epsilon = 1e-14);
        assert_eq!(s.f_tilde_prime, s.f_tilde_double_prime);

        let s = solve_standard_form_ii(&StandardFormParams::symmetric(1.0, 0.5, -0.3)).unwrap();
        assert_relative_eq!(s.u1_tilde, 1.183216, epsilon = 1e-6);
        assert_relative_eq!(s.f_tilde, 0.366432, epsilon = 1e-6);
        assert!(s.twin_discrepancy() < 1e-12);
        assert_eq!(s.alpha_tilde_m_sq, Some(1.0));
    }

    #[test]
    fn bisection_agrees_with_symmetric_closed_form() {
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.3);
        let mut q = p;
        q.b2 = 1.0 - 1e-13;
        let s = solve_standard_form_ii(&q).unwrap();
        assert_eq!(s.method, SolveMethod::Bisection);
        assert!((s.u1_tilde - (0.7f64 / 0.5).sqrt()).abs() < 1e-9);
        assert_eq!(s.brackets.len(), 1);
    }

    #[test]
    fn solve_generic() {
        let p = generic();
        let s = solve_standard_form_ii(&p).unwrap();
        assert!(s.u1_tilde >= 1.0 && s.u1_tilde <= 3.2);
        assert!(s.u2_tilde >= 1.0 && s.u2_tilde <= 2.2);
        assert!(s.residual_eq1 < 1e-12 && s.residual_eq3 < 1e-12, "{s:?}");
        assert!(s.twin_discrepancy() < 1e-9);
        assert!(s.f_tilde_prime > 0.0 && s.f_tilde_double_prime >= 0.0);
        let v = f_uu(&p, &s.scaling()).unwrap();
        assert!((v.value - s.f_tilde).abs() < 1e-9);
        let t = indicator_identity_check(&p, &s);
        assert!(t.residual < 1e-12 && t.z_residual < 1e-12, "{t:?}");
        assert_eq!(s.f_tilde > 0.0, p.simon_d_pt() > 0.0);
    }

    #[test]
    fn boundary_state_matches_closed_form() {
        // symmetric threshold perturbed off the symmetric branch: bisect c for D^PT = 0
        let (b1, b2, ratio) = (1.3, 0.9, 0.6);
        let dpt = |c: f64| StandardFormParams::new(b1, b2, c, -ratio * c).simon_d_pt();
        let (mut lo, mut hi) = (0.0, (b1 * b2 - b1 / (4.0 * b2)).sqrt());
        assert!(dpt(lo) > 0.0 && dpt(hi) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if dpt(m) > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        let p = StandardFormParams::new(b1, b2, lo, -ratio * lo);
        let s = solve_standard_form_ii(&p).unwrap();
        let (u1, u2) = boundary_scaling_closed(&p).unwrap();
        assert!(s.f_tilde.abs() < 1e-8, "{s:?}");
        assert!((s.u1_tilde - u1).abs() < 1e-8, "{} vs {u1}", s.u1_tilde);
        assert!((s.u2_tilde - u2).abs() < 1e-8);
    }

    #[test]
    fn classicality() {
        let vac = solve_standard_form_ii(&StandardFormParams::VACUUM).unwrap();
        assert!(classicality_check(&StandardFormParams::VACUUM, &vac).unwrap());
        assert_eq!(vac.f_tilde, 0.0);
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.3);
        assert!(classicality_check(&p, &solve_standard_form_ii(&p).unwrap()).unwrap());
        let t = StandardFormParams::tmsv(0.5);
        let s = solve_standard_form_ii(&t).unwrap();
        assert!(s.f_tilde < 0.0);
        assert!(!classicality_check(&t, &s).unwrap());
    }

    #[test]
    fn indicator_identity_special_cases() {
        let vac = StandardFormParams::VACUUM;
        assert_eq!(indicator_identity_residual(&vac, &solve_standard_form_ii(&vac).unwrap()), 0.0);
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.3);
        assert!(indicator_identity_residual(&p, &solve_standard_form_ii(&p).unwrap()) <= 1e-10);
    }

    #[test]
    fn unphysical_input_fails() {
        // With d = 0, φ(2b1) = 16 b1 b2 D, negative for an unphysical D < 0.
        let p = StandardFormParams::new(1.0, 0.9, 0.85, 0.0);
        assert!(p.simon_d() < 0.0 && phi_upper_closed(&p) < 0.0);
        assert!(matches!(solve_standard_form_ii(&p), Err(crate::Error::NumericalFailure(_))));
    }
}
