//! Seeded generation of physical standard-form parameters and of randomly
//! rotated and squeezed covariance matrices.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, numerical, Result};
use crate::symplectic::{
    apply_local_symplectic, build_standard_cm, single_mode_symplectic, CovarianceMatrix, StandardFormParams,
};
use crate::tolerances::EPS_PHYS;

const MAX_REJECTIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Generic,
    /// `c = d = 0`.
    Thermal,
    /// Mode-mixed thermal, `c = d > 0`.
    Mts,
    /// Squeezed thermal, `c = −d > 0`.
    Sts,
    /// `b1 = b2`.
    Symmetric,
    /// `D = 0`.
    PhysicalityEdge,
    /// `D^PT = 0` with `d < 0`.
    SeparabilityThreshold,
}

impl FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Family> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "generic" => Family::Generic,
            "thermal" | "ts" => Family::Thermal,
            "mts" => Family::Mts,
            "sts" => Family::Sts,
            "symmetric" | "sym" => Family::Symmetric,
            "edge" | "physicality_edge" => Family::PhysicalityEdge,
            "threshold" | "separability_threshold" => Family::SeparabilityThreshold,
            other => return Err(invalid(format!("unknown family '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub b_max: f64,
    /// Fixes `c` at this fraction of its uncertainty ceiling; random when absent.
    pub strength: Option<f64>,
    pub seed: u64,
    /// Forces `d < 0` and `c` close to its ceiling so that about half of the
    /// generic samples are entangled.
    pub entangled_bias: bool,
}

impl FamilySpec {
    pub fn new(family: Family, seed: u64) -> FamilySpec {
        FamilySpec { family, b_max: 5.0, strength: None, seed, entangled_bias: false }
    }

    fn validate(&self) -> Result<()> {
        if !(self.b_max.is_finite() && self.b_max > 0.5) {
            return Err(invalid(format!("b_max must exceed 1/2, got {}", self.b_max)));
        }
        if let Some(s) = self.strength {
            if !(0.0..=1.0).contains(&s) {
                return Err(invalid(format!("strength must lie in [0, 1], got {s}")));
            }
        }
        Ok(())
    }
}

/// Largest `c` allowed by the uncertainty bound for `b1 ≥ b2`.
pub fn c_ceiling(b1: f64, b2: f64) -> f64 {
    (b1 * b2 - 0.25 * b1 / b2).max(0.0).sqrt()
}

/// Stream of samples for one spec; `sample_params` takes the first.
pub struct Sampler {
    spec: FamilySpec,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(spec: FamilySpec) -> Result<Sampler> {
        spec.validate()?;
        Ok(Sampler { spec, rng: ChaCha8Rng::seed_from_u64(spec.seed) })
    }

    fn draw_b(&mut self) -> (f64, f64) {
        let x = self.rng.gen_range(0.5..=self.spec.b_max);
        if self.spec.family == Family::Symmetric {
            return (x, x);
        }
        let y = self.rng.gen_range(0.5..=self.spec.b_max);
        (x.max(y), x.min(y))
    }

    fn draw_c(&mut self, ceiling: f64) -> f64 {
        let frac = match self.spec.strength {
            Some(s) => s,
            None if self.spec.entangled_bias => self.rng.gen_range(0.8..=1.0),
            None => self.rng.gen_range(0.0..=1.0),
        };
        frac * ceiling
    }

    fn candidate(&mut self) -> Option<StandardFormParams> {
        let (b1, b2) = self.draw_b();
        let ceiling = c_ceiling(b1, b2);
        match self.spec.family {
            Family::Thermal => Some(StandardFormParams::new(b1, b2, 0.0, 0.0)),
            Family::Mts => {
                let c = self.draw_c(ceiling);
                (c > 0.0).then(|| StandardFormParams::new(b1, b2, c, c))
            }
            Family::Sts => {
                let c = self.draw_c(ceiling);
                (c > 0.0).then(|| StandardFormParams::new(b1, b2, c, -c))
            }
            Family::Generic | Family::Symmetric => {
                let c = self.draw_c(ceiling);
                let d = if self.spec.entangled_bias {
                    -c * self.rng.gen_range(0.5..=1.0)
                } else {
                    c * self.rng.gen_range(-1.0..=1.0)
                };
                Some(StandardFormParams::new(b1, b2, c, d))
            }
            Family::PhysicalityEdge => {
                let ratio = self.rng.gen_range(-1.0..=1.0);
                bisect_c(b1, b2, ratio, ceiling, |p| p.simon_d())
            }
            Family::SeparabilityThreshold => {
                let ratio = -self.rng.gen_range(0.05..=1.0);
                bisect_c(b1, b2, ratio, ceiling, |p| p.simon_d_pt())
            }
        }
    }

    pub fn next_params(&mut self) -> Result<StandardFormParams> {
        for _ in 0..MAX_REJECTIONS {
            if let Some(p) = self.candidate() {
                if p.check(EPS_PHYS).is_ok() {
                    return Ok(p);
                }
            }
        }
        Err(numerical(format!("{MAX_REJECTIONS} consecutive rejections for {:?}", self.spec)))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Root in `c ∈ (0, ceiling]` of `target(b1, b2, c, ratio·c)`, or `None` when
/// the target does not change sign on that range.
fn bisect_c(
    b1: f64,
    b2: f64,
    ratio: f64,
    ceiling: f64,
    target: impl Fn(&StandardFormParams) -> f64,
) -> Option<StandardFormParams> {
    let at = |c: f64| target(&StandardFormParams::new(b1, b2, c, ratio * c));
    let (mut lo, mut hi) = (0.0, ceiling);
    if !(at(lo) > 0.0 && at(hi) < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if at(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    // prefer the side with a non-negative target, which keeps D ≥ 0
    let p = StandardFormParams::new(b1, b2, lo, ratio * lo);
    (at(lo).abs() <= 1e-10).then_some(p)
}

pub fn sample_params(spec: &FamilySpec) -> Result<StandardFormParams> {
    Sampler::new(*spec)?.next_params()
}

pub fn sample_batch(spec: &FamilySpec, count: usize) -> Result<Vec<StandardFormParams>> {
    let mut s = Sampler::new(*spec)?;
    (0..count).map(|_| s.next_params()).collect()
}

/// Angles and squeezings of a product of single-mode symplectic maps
/// `R(θ)·diag(e^r, e^−r)·R(φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalAction {
    pub theta1: f64,
    pub r1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub r2: f64,
    pub phi2: f64,
}

impl LocalAction {
    pub const IDENTITY: LocalAction = LocalAction { theta1: 0.0, r1: 0.0, phi1: 0.0, theta2: 0.0, r2: 0.0, phi2: 0.0 };

    pub fn random(rng: &mut impl Rng) -> LocalAction {
        LocalAction {
            theta1: rng.gen_range(0.0..TAU),
            r1: rng.gen_range(-1.0..=1.0),
            phi1: rng.gen_range(0.0..TAU),
            theta2: rng.gen_range(0.0..TAU),
            r2: rng.gen_range(-1.0..=1.0),
            phi2: rng.gen_range(0.0..TAU),
        }
    }

    pub fn apply(&self, cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        apply_local_symplectic(
            cm,
            &single_mode_symplectic(self.theta1, self.r1, self.phi1),
            &single_mode_symplectic(self.theta2, self.r2, self.phi2),
        )
    }
}

/// Standard-form matrix of `p` hidden behind a random local action.
pub fn randomize_cm(p: &StandardFormParams, seed: u64) -> Result<CovarianceMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LocalAction::random(&mut rng).apply(&build_standard_cm(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{extract_standard_params, spectrum, symplectic_eigenvalues};

    #[test]
    fn families_hold_their_markers() {
        for seed in 0..50 {
            let t = sample_params(&FamilySpec::new(Family::Thermal, seed)).unwrap();
            assert_eq!((t.c, t.d), (0.0, 0.0));
            let s = sample_params(&FamilySpec::new(Family::Sts, seed)).unwrap();
            assert_eq!(s.c + s.d, 0.0);
            let m = sample_params(&FamilySpec::new(Family::Mts, seed)).unwrap();
            assert!(m.c == m.d && m.c > 0.0);
            let y = sample_params(&FamilySpec::new(Family::Symmetric, seed)).unwrap();
            assert_eq!(y.b1, y.b2);
            let e = sample_params(&FamilySpec::new(Family::PhysicalityEdge, seed)).unwrap();
            assert!(e.simon_d().abs() <= 1e-10);
            let h = sample_params(&FamilySpec::new(Family::SeparabilityThreshold, seed)).unwrap();
            assert!(h.simon_d_pt().abs() <= 1e-10 && h.d < 0.0);
        }
    }

    #[test]
    fn generic_samples_are_physical_and_deterministic() {
        let spec = FamilySpec::new(Family::Generic, 7);
        let a = sample_batch(&spec, 200).unwrap();
        assert_eq!(a, sample_batch(&spec, 200).unwrap());
        for p in &a {
            p.check(EPS_PHYS).unwrap();
            assert!(p.b1 <= 5.0);
        }
    }

    #[test]
    fn entangled_bias_balances_verdicts() {
        let spec = FamilySpec { entangled_bias: true, ..FamilySpec::new(Family::Generic, 3) };
        let batch = sample_batch(&spec, 1000).unwrap();
        let entangled = batch.iter().filter(|p| p.simon_d_pt() < 0.0).count();
        assert!(batch.iter().all(|p| p.d <= 0.0));
        assert!((300..=800).contains(&entangled), "{entangled}");
    }

    #[test]
    fn strength_and_spec_validation() {
        let spec = FamilySpec { strength: Some(0.0), ..FamilySpec::new(Family::Generic, 1) };
        let p = sample_params(&spec).unwrap();
        assert_eq!((p.c, p.d), (0.0, 0.0));
        let bad = FamilySpec { b_max: 0.4, ..FamilySpec::new(Family::Generic, 1) };
        assert!(sample_params(&bad).is_err());
        assert!("nope".parse::<Family>().is_err());
        assert_eq!("threshold".parse::<Family>().unwrap(), Family::SeparabilityThreshold);
    }

    #[test]
    fn identity_action_keeps_matrix() {
        let p = StandardFormParams::new(1.0, 0.8, 0.5, -0.3);
        let cm = build_standard_cm(&p);
        assert_eq!(LocalAction::IDENTITY.apply(&cm).unwrap(), cm);
    }

    #[test]
    fn randomized_round_trip() {
        let batch = sample_batch(&FamilySpec::new(Family::Generic, 11), 100).unwrap();
        for (seed, p) in batch.iter().enumerate() {
            let cm = randomize_cm(p, seed as u64).unwrap();
            let q = extract_standard_params(&cm).unwrap();
            for (a, b) in [(p.b1, q.b1), (p.b2, q.b2), (p.c, q.c), (p.d, q.d)] {
                assert!((a - b).abs() <= 1e-9 * p.b1, "{p:?} vs {q:?}");
            }
            let (kp, km) = symplectic_eigenvalues(&cm).unwrap();
            let s = spectrum(p).unwrap();
            assert!((kp - s.kappa_plus).abs() <= 1e-9 * kp && (km - s.kappa_minus).abs() <= 1e-9 * kp);
        }
    }
}
