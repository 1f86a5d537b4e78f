//! Hessians of the indicator functions at their closed-form stationary points.

use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};

use super::{e_m_closed, f_m_closed, g_m_closed, variance_p_reid, variance_q_reid};
use crate::error::{invalid, Result};
use crate::symplectic::{spectrum, StandardFormParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianCheck {
    pub variables: Vec<String>,
    /// Row-major closed-form entries.
    pub entries: Vec<Vec<f64>>,
    /// Nested principal minors in the order they are usually quoted.
    pub minors: Vec<f64>,
    pub stationary_point: Vec<f64>,
    pub positive_definite: bool,
}

fn rows2(m: &Matrix2<f64>) -> Vec<Vec<f64>> {
    (0..2).map(|i| (0..2).map(|j| m[(i, j)]).collect()).collect()
}

fn rows3(m: &Matrix3<f64>) -> Vec<Vec<f64>> {
    (0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect()
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Hessian of `ln E(λ, μ)` at `(λm, μm)`.
pub fn hessian_e(p: &StandardFormParams) -> Result<HessianCheck> {
    let e = e_m_closed(p)?;
    let s = spectrum(p)?;
    let g = p.b1 * p.b2;
    let q = variance_q_reid(p, e.lambda_m);
    let pp = variance_p_reid(p, e.mu_m);
    let norm = 1.0 + e.lambda_m * e.mu_m;
    let h11 = 2.0 * (g - p.c * p.c) / (q * q);
    let h22 = 2.0 * (g - p.d * p.d) / (pp * pp);
    let h12 = -2.0 / (norm * norm);
    let m = Matrix2::new(h11, h12, h12, h22);
    let det = 4.0 * s.delta_pt.sqrt() / (e.e_m * norm.powi(4));
    Ok(HessianCheck {
        variables: names(&["lambda", "mu"]),
        entries: rows2(&m),
        minors: vec![h11, det],
        stationary_point: vec![e.lambda_m, e.mu_m],
        positive_definite: h11 > 0.0 && det > 0.0 && m.cholesky().is_some(),
    })
}

/// Exact Hessian of `F` in the variables `(u1, u2, α²)` at an arbitrary point.
pub fn f_hessian_exact(p: &StandardFormParams, alpha_sq: f64, u1: f64, u2: f64) -> Matrix3<f64> {
    let StandardFormParams { b1, b2, c, d } = *p;
    let t = alpha_sq;
    let s = (u1 * u2).sqrt();
    let plus = c * s + d / s;
    let minus = c * s - d / s;

    let n = b1 * (u1 + 1.0 / u1) * t * t - 2.0 * minus * t + b2 * (u2 + 1.0 / u2);
    let n_1 = b1 * (1.0 - 1.0 / (u1 * u1)) * t * t - t * plus / u1;
    let n_2 = b2 * (1.0 - 1.0 / (u2 * u2)) - t * plus / u2;
    let n_t = 2.0 * b1 * (u1 + 1.0 / u1) * t - 2.0 * minus;
    let n_11 = 2.0 * b1 * t * t / u1.powi(3) - t * (minus / (2.0 * u1 * u1) - plus / (u1 * u1));
    let n_22 = 2.0 * b2 / u2.powi(3) - t * (minus / (2.0 * u2 * u2) - plus / (u2 * u2));
    let n_12 = -t * minus / (2.0 * u1 * u2);
    let n_1t = 2.0 * b1 * (1.0 - 1.0 / (u1 * u1)) * t - plus / u1;
    let n_2t = -plus / u2;
    let n_tt = 2.0 * b1 * (u1 + 1.0 / u1);

    let den = t * t + 1.0;
    let den_t = 2.0 * t;
    let f_11 = n_11 / den;
    let f_22 = n_22 / den;
    let f_12 = n_12 / den;
    let f_1t = n_1t / den - n_1 * den_t / (den * den);
    let f_2t = n_2t / den - n_2 * den_t / (den * den);
    let f_tt =
        n_tt / den - 2.0 * n_t * den_t / (den * den) + 2.0 * n * den_t * den_t / den.powi(3) - 2.0 * n / (den * den);
    Matrix3::new(f_11, f_12, f_1t, f_12, f_22, f_2t, f_1t, f_2t, f_tt)
}

/// Hessian of `F` at its stationary point. Entries come from direct
/// differentiation; the minors `H11`, `A33`, `det H` are the closed forms
/// (the `H11` form used here stays finite for squeezed thermal states).
pub fn hessian_f(p: &StandardFormParams) -> Result<HessianCheck> {
    let f = f_m_closed(p)?;
    let s = spectrum(p)?;
    let StandardFormParams { b1, b2, c, d } = *p;
    let g = b1 * b2;
    let root = s.delta_pt.sqrt();
    let k1 = b1 * c - b2 * d;
    let k2 = b2 * c - b1 * d;
    let (u1, u2, a2) = (f.u1m, f.u2m, f.alpha_m_sq);
    let w = a2 + 1.0 / a2;
    let common = c * (b1 * b1 + b2 * b2) - 2.0 * d * g + c * root;

    let h11 = f.gamma.sqrt() / (2.0 * w * u1 * u1 * u2) / (b1 * root + b1 * (b1 * b1 - b2 * b2) - 2.0 * d * k1)
        * ((1.0 + 1.0 / (u1 * u1)) * b1 * (g - d * d) / (f.gamma * (g - c * c)) * common + 4.0 * (g - d * d) * k1);
    let a33 = 1.0 / (w * w * u1 * u2)
        * (g * (1.0 / u2 - 1.0 / u1).powi(2)
            + 4.0 * (g - c * c) * k1 * k2 / common / (c - d) * (1.0 + 1.0 / (u1 * u2)));
    let det = 4.0 / (a2 * a2 * w.powi(3) * (u1 * u2).powf(1.5)) * 4.0 * (g - c * c) * k1 * k2 / common;

    let m = f_hessian_exact(p, a2, u1, u2);
    Ok(HessianCheck {
        variables: names(&["u1", "u2", "alpha_sq"]),
        entries: rows3(&m),
        minors: vec![h11, a33, det],
        stationary_point: vec![u1, u2, a2],
        positive_definite: h11 > 0.0 && a33 > 0.0 && det > 0.0 && m.cholesky().is_some(),
    })
}

/// `[H11, A33, det H]` of `F` for squeezed thermal states (`c + d = 0`).
pub fn hessian_f_sts_minors(p: &StandardFormParams) -> Result<[f64; 3]> {
    let StandardFormParams { b1, b2, c, d } = *p;
    if (c + d).abs() > 1e-12 * c.max(1.0) || c <= 0.0 {
        return Err(invalid("squeezed thermal minors need c = -d > 0"));
    }
    let delta = (b1 - b2).powi(2) + 4.0 * c * c;
    let sd = delta.sqrt();
    let h11 = (b1 * sd - (b1 * (b1 - b2) + c * c)) / sd;
    let a33 = c * c / delta * (b1 + b2) * ((b1 + b2) - sd);
    let det = c * c * (b1 + b2) * (sd + (b1 - b2)).powi(2) * ((b1 + b2) - sd) / delta.powf(1.5);
    Ok([h11, a33, det])
}

/// `[H11, A33, det H]` of `F` for symmetric states (`b1 = b2`, `d < 0`).
pub fn hessian_f_symmetric_minors(p: &StandardFormParams) -> Result<[f64; 3]> {
    let StandardFormParams { b1, b2, c, d } = *p;
    if (b1 - b2).abs() > 1e-12 * b1 || d >= 0.0 {
        return Err(invalid("symmetric minors need b1 = b2 and d < 0"));
    }
    let b = b1;
    let r = (b - c) / (b + d);
    let h11 = r.sqrt() / (b + d) * (b * ((b - c) + (b + d)) + 2.0 * (b - c) * (b + d)) / 4.0;
    let a33 = 0.5 * r * r * b * ((b - c) + (b + d));
    let det = r.powf(1.5) * b * (b - c) * (c - d);
    Ok([h11, a33, det])
}

/// Hessian of `G` in the variables `(u1, ξ, η)` at its stationary point.
pub fn hessian_g(p: &StandardFormParams) -> Result<HessianCheck> {
    let gs = g_m_closed(p)?;
    let StandardFormParams { b1, b2, c, d } = *p;
    let g = b1 * b2;
    let a = b2 * (g - c * c) - 0.25 * b1;
    let b = b2 * (g - d * d) - 0.25 * b1;
    let k = b2 * b2 - 0.25;
    let u = gs.u1m;
    let h11 = (b + 0.5 * a * (u * u + 1.0) + 0.5 * b2 * c * c * (u - 1.0).powi(2) + 0.5 * c * (2.0 * b2 * c + d) * u)
        / (k * u.powi(3));
    let h12 = -c / u.sqrt();
    let h13 = -d / u.powf(1.5);
    let m = Matrix3::new(h11, h12, h13, h12, 2.0 * b2, -1.0, h13, -1.0, 2.0 * b2);
    let a11 = 4.0 * k;
    let det = 2.0 / u.powi(3) * (2.0 * b + a * (u * u + 1.0) + b2 * (c * c - d * d));
    Ok(HessianCheck {
        variables: names(&["u1", "xi", "eta"]),
        entries: rows3(&m),
        minors: vec![2.0 * b2, a11, det],
        stationary_point: vec![u, gs.xi_m, gs.eta_m],
        positive_definite: a11 > 0.0 && det > 0.0 && m.cholesky().is_some(),
    })
}
