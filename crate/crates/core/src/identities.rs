//! Algebraic identities satisfied by the partially transposed spectrum.
//!
//! Each residual is `|LHS − RHS|` divided by the sum of the magnitudes of the
//! terms involved, so it measures the identity against rounding rather than
//! against the size of a possibly cancelling difference.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::symplectic::{spectrum, StandardFormParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `κ⁴ − (b1² + b2² − 2cd)κ² + det V = 0` for both PT eigenvalues.
    pub biquadratic: f64,
    /// `det V = (κ+^PT κ−^PT)²`.
    pub det_product: f64,
    /// `D^PT = ((κ+^PT)² − 1/4)((κ−^PT)² − 1/4)`.
    pub d_pt_product: f64,
    /// `[b1 gc − b2 κ²][b2 gc − b1 κ²] = [cκ² − d gc]²`, `gc = b1b2 − c²`.
    pub c_squares: f64,
    /// `[b1 gd − b2 κ²][b2 gd − b1 κ²] = [c gd − dκ²]²`, `gd = b1b2 − d²`.
    pub d_squares: f64,
    /// `[b1 gc − b2 κ²][b2 gd − b1 κ²] = (b1c − b2d)² κ²`.
    pub cross_cd: f64,
    /// `[b1 gd − b2 κ²][b2 gc − b1 κ²] = (b2c − b1d)² κ²`.
    pub cross_dc: f64,
    /// `4AB − (b2² − 1/4 − cd)² = 4(b2² − 1/4) D^PT` with the brackets `A`, `B` of `G`.
    pub g_brackets: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.biquadratic,
            self.det_product,
            self.d_pt_product,
            self.c_squares,
            self.d_squares,
            self.cross_cd,
            self.cross_dc,
            self.g_brackets,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn ratio(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff.abs()
    } else {
        diff.abs() / scale
    }
}

pub fn identity_residuals(p: &StandardFormParams) -> Result<IdentityResiduals> {
    let s = spectrum(p)?;
    let StandardFormParams { b1, b2, c, d } = *p;
    let g = b1 * b2;
    let gc = g - c * c;
    let gd = g - d * d;
    let det_v = s.det_v;
    let sum = b1 * b1 + b2 * b2 - 2.0 * c * d;
    let roots = [s.kappa_plus_pt.powi(2), s.kappa_minus_pt.powi(2)];

    let mut out = IdentityResiduals {
        biquadratic: 0.0,
        det_product: ratio(det_v - roots[0] * roots[1], det_v.abs() + roots[0] * roots[1]),
        d_pt_product: {
            let prod = (roots[0] - 0.25) * (roots[1] - 0.25);
            let scale = det_v.abs() + 0.25 * sum.abs() + 1.0 / 16.0 + prod.abs();
            ratio(s.d_pt - prod, scale)
        },
        c_squares: 0.0,
        d_squares: 0.0,
        cross_cd: 0.0,
        cross_dc: 0.0,
        g_brackets: 0.0,
    };

    for k in roots {
        let biq = k * k - sum * k + det_v;
        out.biquadratic = out.biquadratic.max(ratio(biq, k * k + sum.abs() * k + det_v.abs()));

        let (x1, y1) = (b1 * gc - b2 * k, b2 * gc - b1 * k);
        let (x2, y2) = (b1 * gd - b2 * k, b2 * gd - b1 * k);
        let mag = |a: f64, b: f64, e: f64| (a.abs() + b * k) * (e.abs() + b1.max(b2) * k);
        out.c_squares = out.c_squares.max(ratio(
            x1 * y1 - (c * k - d * gc).powi(2),
            mag(b1 * gc, b2, b2 * gc) + (c.abs() * k + d.abs() * gc).powi(2),
        ));
        out.d_squares = out.d_squares.max(ratio(
            x2 * y2 - (c * gd - d * k).powi(2),
            mag(b1 * gd, b2, b2 * gd) + (c.abs() * gd + d.abs() * k).powi(2),
        ));
        out.cross_cd = out.cross_cd.max(ratio(
            x1 * y2 - (b1 * c - b2 * d).powi(2) * k,
            mag(b1 * gc, b2, b2 * gd) + (b1 * c.abs() + b2 * d.abs()).powi(2) * k,
        ));
        out.cross_dc = out.cross_dc.max(ratio(
            x2 * y1 - (b2 * c - b1 * d).powi(2) * k,
            mag(b1 * gd, b2, b2 * gc) + (b2 * c.abs() + b1 * d.abs()).powi(2) * k,
        ));
    }

    let a = b2 * gc - 0.25 * b1;
    let b = b2 * gd - 0.25 * b1;
    let kk = b2 * b2 - 0.25;
    let lhs = 4.0 * a * b - (kk - c * d).powi(2);
    let rhs = 4.0 * kk * s.d_pt;
    out.g_brackets = ratio(lhs - rhs, 4.0 * (a * b).abs() + (kk - c * d).powi(2) + rhs.abs());
    Ok(out)
}
