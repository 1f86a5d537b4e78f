//! Numerical thresholds used throughout the crate.
//!
//! Every comparison against a closed form, identity or brute-force oracle
//! reads its slack from a [`Tolerances`] value so the CLI can expose them
//! as flags.

use serde::{Deserialize, Serialize};

/// Default slack on the Robertson-Schrödinger bound `κ− ≥ 1/2`.
pub const EPS_PHYS: f64 = 1e-9;

/// Asymmetry above which a matrix is rejected outright.
pub const ASYMMETRY_REJECT: f64 = 1e-9;

/// Asymmetry below which a matrix is reported as symmetric.
pub const ASYMMETRY_FLAG: f64 = 1e-12;

/// Band around zero inside which `D^PT` counts as the separability threshold.
pub const D_PT_BOUNDARY: f64 = 1e-12;

/// Band around zero inside which `f̃` counts as the separability threshold.
pub const F_TILDE_BOUNDARY: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Slack on `κ− ≥ 1/2`.
    pub eps_phys: f64,
    /// Closed-form minimum against brute-force minimum, relative.
    pub closed_vs_oracle: f64,
    /// Residual of algebraic identities, relative.
    pub identity: f64,
    /// Closed-form Hessian entry against finite differences, relative.
    pub hessian_fd: f64,
    /// Relative step for finite-difference Hessians.
    pub fd_step: f64,
    /// `|D^PT|` below which a state sits on the threshold.
    pub d_pt_boundary: f64,
    /// `|f̃|` below which a state sits on the threshold.
    pub f_tilde_boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_phys: EPS_PHYS,
            closed_vs_oracle: 1e-6,
            identity: 1e-9,
            hessian_fd: 1e-4,
            fd_step: 1e-4,
            d_pt_boundary: D_PT_BOUNDARY,
            f_tilde_boundary: F_TILDE_BOUNDARY,
        }
    }
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
