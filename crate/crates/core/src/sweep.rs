//! One-parameter sweeps across a state family, tabulated as CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::indicators::{indicator_report, Verdict};
use crate::sfii::solve_standard_form_ii;
use crate::state_gen::Family;
use crate::symplectic::{spectrum, StandardFormParams};
use crate::tolerances::EPS_PHYS;

pub const CSV_HEADER: &str = "parameter,D_PT,kappa_minus_pt,E_m,F_m,G_m,f_tilde,verdict";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// Local variances (`b1 = b2` for the symmetric family, `b1` otherwise).
    B,
    C,
    D,
    /// Two-mode squeezing of the squeezed thermal family.
    R,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b" => Ok(SweepAxis::B),
            "c" => Ok(SweepAxis::C),
            "d" => Ok(SweepAxis::D),
            "r" => Ok(SweepAxis::R),
            other => Err(invalid(format!("unknown sweep axis '{other}' (expected b, c, d or r)"))),
        }
    }
}

/// Inclusive grid `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<SweepRange> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi || steps < 2 {
            return Err(invalid(format!("degenerate range {lo}:{hi}:{steps} (need lo < hi and steps ≥ 2)")));
        }
        Ok(SweepRange { lo, hi, steps })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let n = (self.steps - 1) as f64;
        (0..self.steps).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / n)
    }
}

impl FromStr for SweepRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(invalid(format!("range '{s}' is not lo:hi:steps")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| invalid(format!("bad number '{t}' in range: {e}")));
        let steps = steps.trim().parse::<usize>().map_err(|e| invalid(format!("bad step count '{steps}': {e}")))?;
        SweepRange::new(num(lo)?, num(hi)?, steps)
    }
}

/// Values held fixed while one parameter moves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepBase {
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
    pub d: f64,
    /// `d = d_ratio·c` when sweeping `c` in the generic and symmetric families.
    pub d_ratio: f64,
    /// Thermal occupancy of the squeezed thermal family.
    pub thermal: f64,
}

impl Default for SweepBase {
    fn default() -> Self {
        SweepBase { b1: 1.0, b2: 1.0, c: 0.5, d: -0.5, d_ratio: -1.0, thermal: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub params: StandardFormParams,
    pub d_pt: f64,
    pub kappa_minus_pt: f64,
    pub e_m: f64,
    pub f_m: f64,
    pub g_m: Option<f64>,
    pub f_tilde: f64,
    pub verdict: Verdict,
}

/// State at sweep value `x`, or `InvalidInput` if the axis does not apply to
/// the family.
pub fn sweep_point(family: Family, axis: SweepAxis, x: f64, base: &SweepBase) -> Result<StandardFormParams> {
    use Family::*;
    use SweepAxis::*;
    let p = match (family, axis) {
        (Sts, R) => StandardFormParams::squeezed_thermal(base.thermal, x),
        (Sts, C) => StandardFormParams::new(base.b1, base.b2, x, -x),
        (Sts, B) => StandardFormParams::new(x, base.b2, base.c, -base.c),
        (Mts, C) => StandardFormParams::new(base.b1, base.b2, x, x),
        (Mts, B) => StandardFormParams::new(x, base.b2, base.c, base.c),
        (Thermal, B) => StandardFormParams::new(x, base.b2, 0.0, 0.0),
        (Symmetric, B) => StandardFormParams::symmetric(x, base.c, base.d),
        (Symmetric, C) => StandardFormParams::symmetric(base.b1, x, base.d_ratio * x),
        (Symmetric, D) => StandardFormParams::symmetric(base.b1, base.c, x),
        (Generic, B) => StandardFormParams::new(x, base.b2, base.c, base.d),
        (Generic, C) => StandardFormParams::new(base.b1, base.b2, x, base.d_ratio * x),
        (Generic, D) => StandardFormParams::new(base.b1, base.b2, base.c, x),
        (f, a) => return Err(invalid(format!("axis {a:?} does not apply to family {f:?}"))),
    };
    // relabel the modes when the sweep pushes b1 below b2
    let p = if p.b1 < p.b2 { StandardFormParams { b1: p.b2, b2: p.b1, ..p } } else { p };
    p.check(EPS_PHYS).map_err(|e| invalid(format!("sweep value {x} gives an invalid state: {e}")))?;
    Ok(p)
}

pub fn sweep(family: Family, axis: SweepAxis, range: &SweepRange, base: &SweepBase) -> Result<Vec<SweepRow>> {
    range
        .values()
        .map(|x| {
            let p = sweep_point(family, axis, x, base)?;
            let s = spectrum(&p)?;
            let ind = indicator_report(&p)?;
            let sol = solve_standard_form_ii(&p)?;
            Ok(SweepRow {
                parameter: x,
                params: p,
                d_pt: s.d_pt,
                kappa_minus_pt: s.kappa_minus_pt,
                e_m: ind.e_m,
                f_m: ind.f_m,
                g_m: ind.g_m,
                f_tilde: sol.f_tilde,
                verdict: ind.verdict,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let g = r.g_m.map(|g| format!("{g:e}")).unwrap_or_default();
        let verdict = match r.verdict {
            Verdict::Separable => "separable",
            Verdict::Entangled => "entangled",
        };
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{},{:e},{}",
            r.parameter, r.d_pt, r.kappa_minus_pt, r.e_m, r.f_m, g, r.f_tilde, verdict
        );
    }
    out
}
