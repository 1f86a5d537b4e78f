//! Covariance matrices of two-mode Gaussian states and their symplectic
//! invariants.
//!
//! Matrices are stored in `(q1, p1, q2, p2)` ordering with the vacuum
//! variance equal to 1/2. The standard form has diagonal blocks `b1·I`,
//! `b2·I` and cross block `diag(c, d)`; `b1 ≥ b2` and `c ≥ |d|` are enforced
//! by [`extract_standard_params`].

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, numerical, Result};
use crate::tolerances::{ASYMMETRY_FLAG, ASYMMETRY_REJECT, EPS_PHYS};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Row/column ordering of a covariance matrix on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Ordering {
    #[default]
    #[serde(rename = "q1p1q2p2")]
    Q1P1Q2P2,
    #[serde(rename = "q1q2p1p2")]
    Q1Q2P1P2,
}

impl Ordering {
    /// Index into `(q1, p1, q2, p2)` of row `i` in this ordering.
    fn canonical_index(self, i: usize) -> usize {
        match self {
            Ordering::Q1P1Q2P2 => i,
            Ordering::Q1Q2P1P2 => [0, 2, 1, 3][i],
        }
    }
}

impl std::str::FromStr for Ordering {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q1p1q2p2" => Ok(Ordering::Q1P1Q2P2),
            "q1q2p1p2" => Ok(Ordering::Q1Q2P1P2),
            other => Err(invalid(format!("unknown ordering '{other}'"))),
        }
    }
}

/// Real 4×4 covariance matrix in `(q1, p1, q2, p2)` ordering.
///
/// Construction does not check physicality; see [`validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

/// On-disk JSON shape: `{"ordering": "q1p1q2p2", "matrix": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrixJson {
    #[serde(default)]
    pub ordering: Ordering,
    pub matrix: [[f64; 4]; 4],
}

impl CovarianceMatrix {
    pub fn new(m: Matrix4<f64>) -> Self {
        CovarianceMatrix(m)
    }

    pub fn from_rows(rows: [[f64; 4]; 4], ordering: Ordering) -> Self {
        let mut m = Matrix4::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(ordering.canonical_index(i), ordering.canonical_index(j))] = v;
            }
        }
        CovarianceMatrix(m)
    }

    pub fn to_rows(&self, ordering: Ordering) -> [[f64; 4]; 4] {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[(ordering.canonical_index(i), ordering.canonical_index(j))];
            }
        }
        rows
    }

    pub fn from_json(file: &CovarianceMatrixJson) -> Self {
        Self::from_rows(file.matrix, file.ordering)
    }

    pub fn to_json(&self, ordering: Ordering) -> CovarianceMatrixJson {
        CovarianceMatrixJson { ordering, matrix: self.to_rows(ordering) }
    }

    /// Vacuum state, `(1/2)·I₄`.
    pub fn vacuum() -> Self {
        CovarianceMatrix(Matrix4::identity() * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Entry `(i, j)` in canonical ordering.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn block_v1(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_v2(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Covariance matrix of the partially transposed operator (`p2 → −p2`).
    pub fn partial_transpose(&self) -> Self {
        let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        CovarianceMatrix(flip * self.0 * flip)
    }

    pub fn symmetrized(&self) -> Matrix4<f64> {
        (self.0 + self.0.transpose()) * 0.5
    }

    pub fn max_asymmetry(&self) -> f64 {
        (self.0 - self.0.transpose()).amax()
    }
}

/// Standard matrix of the symplectic form, `J = J1 ⊕ J1` with `J1 = [[0, 1], [−1, 0]]`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 1)] = 1.0;
    j[(1, 0)] = -1.0;
    j[(2, 3)] = 1.0;
    j[(3, 2)] = -1.0;
    j
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub symmetric: bool,
    pub positive_definite: bool,
    pub rs_satisfied: bool,
    /// Smallest symplectic eigenvalue; absent when the matrix is not positive definite.
    pub kappa_minus: Option<f64>,
}

/// Checks symmetry, positive definiteness and the Robertson-Schrödinger
/// bound `κ− ≥ 1/2 − eps_phys`.
pub fn validate(cm: &CovarianceMatrix, eps_phys: f64) -> Result<PhysicalityReport> {
    if cm.0.iter().any(|v| !v.is_finite()) {
        return Err(invalid("covariance matrix has non-finite entries"));
    }
    let asym = cm.max_asymmetry();
    if asym > ASYMMETRY_REJECT {
        return Err(invalid(format!("covariance matrix is not symmetric (max |V - V^T| = {asym:e})")));
    }
    let eig = SymmetricEigen::try_new(cm.symmetrized(), EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| numerical("eigen-solver did not converge"))?;
    let positive_definite = eig.eigenvalues.min() > 0.0;
    let kappa_minus = if positive_definite { Some(symplectic_eigenvalues(cm)?.1) } else { None };
    Ok(PhysicalityReport {
        symmetric: asym <= ASYMMETRY_FLAG,
        positive_definite,
        rs_satisfied: kappa_minus.is_some_and(|k| k >= 0.5 - eps_phys),
        kappa_minus,
    })
}

/// `(κ+, κ−)`: moduli of the eigenvalues of `J·V`.
///
/// `J·V` is similar to the real antisymmetric `M = V^{1/2} J V^{1/2}`, whose
/// eigenvalues `±iκ` are recovered from the symmetric matrix `MᵀM`.
pub fn symplectic_eigenvalues(cm: &CovarianceMatrix) -> Result<(f64, f64)> {
    let v = cm.symmetrized();
    let eig = SymmetricEigen::try_new(v, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| numerical("eigen-solver did not converge"))?;
    if eig.eigenvalues.min() <= 0.0 {
        return Err(invalid("covariance matrix is not positive definite"));
    }
    let sqrt_diag = Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let sqrt_v = eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let m = sqrt_v * symplectic_form() * sqrt_v;
    let mtm = m.transpose() * m;
    let sq = SymmetricEigen::try_new((mtm + mtm.transpose()) * 0.5, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| numerical("eigen-solver did not converge"))?;
    let mut e: Vec<f64> = sq.eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    let minus = (0.5 * (e[0] + e[1])).max(0.0).sqrt();
    let plus = (0.5 * (e[2] + e[3])).max(0.0).sqrt();
    if !(plus.is_finite() && minus.is_finite()) {
        return Err(numerical("non-finite symplectic eigenvalue"));
    }
    Ok((plus, minus))
}

/// Local invariants `{b1, b2, c, d}` of the standard form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormParams {
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
    pub d: f64,
}

impl StandardFormParams {
    pub const VACUUM: StandardFormParams = StandardFormParams { b1: 0.5, b2: 0.5, c: 0.0, d: 0.0 };

    pub fn new(b1: f64, b2: f64, c: f64, d: f64) -> Self {
        StandardFormParams { b1, b2, c, d }
    }

    pub fn symmetric(b: f64, c: f64, d: f64) -> Self {
        StandardFormParams { b1: b, b2: b, c, d }
    }

    /// Squeezed thermal state with mean occupancy `n` in each thermal mode
    /// and two-mode squeeze parameter `r`; `n = 0` is the two-mode squeezed vacuum.
    pub fn squeezed_thermal(n: f64, r: f64) -> Self {
        let scale = n + 0.5;
        let b = scale * (2.0 * r).cosh();
        let c = scale * (2.0 * r).sinh();
        StandardFormParams { b1: b, b2: b, c, d: -c }
    }

    /// Two-mode squeezed vacuum.
    pub fn tmsv(r: f64) -> Self {
        Self::squeezed_thermal(0.0, r)
    }

    pub fn det_v(&self) -> f64 {
        let g = self.b1 * self.b2;
        (g - self.c * self.c) * (g - self.d * self.d)
    }

    /// Simon invariant `D = det(V + iJ/2)`.
    pub fn simon_d(&self) -> f64 {
        self.det_v() - 0.25 * (self.b1 * self.b1 + self.b2 * self.b2 + 2.0 * self.c * self.d) + 0.0625
    }

    /// `D^PT = det(V^PT + iJ/2)`.
    pub fn simon_d_pt(&self) -> f64 {
        self.det_v() - 0.25 * (self.b1 * self.b1 + self.b2 * self.b2 - 2.0 * self.c * self.d) + 0.0625
    }

    /// Checks ordering conventions and the physicality constraints on the
    /// parameters (`b_j ≥ 1/2`, the two `b1·b2 − c² ≥ ...` bounds, `D ≥ 0`)
    /// with slack `eps`.
    pub fn check(&self, eps: f64) -> Result<()> {
        let StandardFormParams { b1, b2, c, d } = *self;
        if ![b1, b2, c, d].iter().all(|v| v.is_finite()) {
            return Err(invalid("standard-form parameters must be finite"));
        }
        let scale = b1.abs().max(1.0);
        if b2 <= 0.0 || b1 < b2 - 1e-12 * scale {
            return Err(invalid(format!("need b1 >= b2 > 0, got b1 = {b1}, b2 = {b2}")));
        }
        if c < d.abs() - 1e-12 * scale {
            return Err(invalid(format!("need c >= |d|, got c = {c}, d = {d}")));
        }
        if b2 < 0.5 - eps {
            return Err(invalid(format!("need b2 >= 1/2, got {b2}")));
        }
        let bound = 0.25 * (b1 / b2).max(b2 / b1);
        if b1 * b2 - c * c < bound - eps || b1 * b2 - d * d < bound - eps {
            return Err(invalid("cross correlations exceed the uncertainty bound"));
        }
        let dd = self.simon_d();
        if dd < -eps {
            return Err(invalid(format!("Robertson-Schrödinger determinant D = {dd:e} < 0")));
        }
        Ok(())
    }
}

/// Partial transposition on standard-form parameters: `d → −d`.
pub fn partial_transpose_params(p: &StandardFormParams) -> StandardFormParams {
    StandardFormParams { d: -p.d, ..*p }
}

/// Scalar symplectic invariants of a state and of its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub kappa_plus_pt: f64,
    pub kappa_minus_pt: f64,
    pub det_v: f64,
    pub d_inv: f64,
    pub d_pt: f64,
    pub delta: f64,
    pub delta_pt: f64,
}

fn clamp_discriminant(value: f64, name: &str) -> Result<f64> {
    if value < -1e-9 {
        return Err(numerical(format!("{name} = {value:e} is negative")));
    }
    Ok(value.max(0.0))
}

/// Symplectic spectrum from the standard-form parameters.
pub fn spectrum(p: &StandardFormParams) -> Result<SymplecticSpectrum> {
    let StandardFormParams { b1, b2, c, d } = *p;
    let det_v = p.det_v();
    let diff = b1 * b1 - b2 * b2;
    let delta = clamp_discriminant(diff * diff + 4.0 * (b1 * c + b2 * d) * (b2 * c + b1 * d), "Delta")?;
    let delta_pt = clamp_discriminant(diff * diff + 4.0 * (b1 * c - b2 * d) * (b2 * c - b1 * d), "Delta^PT")?;
    let sum = b1 * b1 + b2 * b2 + 2.0 * c * d;
    let sum_pt = b1 * b1 + b2 * b2 - 2.0 * c * d;
    let plus_sq = 0.5 * (sum + delta.sqrt());
    let plus_pt_sq = 0.5 * (sum_pt + delta_pt.sqrt());
    // smaller root through the product of roots avoids cancellation
    let minus_sq = det_v / plus_sq;
    let minus_pt_sq = det_v / plus_pt_sq;
    Ok(SymplecticSpectrum {
        kappa_plus: plus_sq.sqrt(),
        kappa_minus: minus_sq.max(0.0).sqrt(),
        kappa_plus_pt: plus_pt_sq.sqrt(),
        kappa_minus_pt: minus_pt_sq.max(0.0).sqrt(),
        det_v,
        d_inv: p.simon_d(),
        d_pt: p.simon_d_pt(),
        delta,
        delta_pt,
    })
}

/// Local squeeze factors `u_j = e^{2 r_j} ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFactors {
    pub u1: f64,
    pub u2: f64,
}

impl ScalingFactors {
    pub const IDENTITY: ScalingFactors = ScalingFactors { u1: 1.0, u2: 1.0 };

    pub fn new(u1: f64, u2: f64) -> Result<Self> {
        if !(u1.is_finite() && u2.is_finite()) || u1 < 1.0 - 1e-12 || u2 < 1.0 - 1e-12 {
            return Err(invalid(format!("scaling factors must be >= 1, got ({u1}, {u2})")));
        }
        Ok(ScalingFactors { u1, u2 })
    }
}

/// Standard form after local squeezes `u1`, `u2`.
pub fn build_scaled_standard_cm(p: &StandardFormParams, u: &ScalingFactors) -> CovarianceMatrix {
    let s = (u.u1 * u.u2).sqrt();
    let mut m = Matrix4::zeros();
    m[(0, 0)] = p.b1 * u.u1;
    m[(1, 1)] = p.b1 / u.u1;
    m[(2, 2)] = p.b2 * u.u2;
    m[(3, 3)] = p.b2 / u.u2;
    m[(0, 2)] = p.c * s;
    m[(2, 0)] = p.c * s;
    m[(1, 3)] = p.d / s;
    m[(3, 1)] = p.d / s;
    CovarianceMatrix(m)
}

pub fn build_standard_cm(p: &StandardFormParams) -> CovarianceMatrix {
    build_scaled_standard_cm(p, &ScalingFactors::IDENTITY)
}

/// Congruence `(S1 ⊕ S2) V (S1 ⊕ S2)ᵀ` by single-mode symplectic factors.
pub fn apply_local_symplectic(cm: &CovarianceMatrix, s1: &Matrix2<f64>, s2: &Matrix2<f64>) -> Result<CovarianceMatrix> {
    for (name, s) in [("s1", s1), ("s2", s2)] {
        let det = s.determinant();
        if !det.is_finite() || (det - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("{name} is not symplectic (det = {det})")));
        }
    }
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(s1);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(s2);
    Ok(CovarianceMatrix(s * cm.0 * s.transpose()))
}

/// `R(θ)·diag(e^r, e^{−r})·R(φ)`.
pub fn single_mode_symplectic(theta: f64, r: f64, phi: f64) -> Matrix2<f64> {
    let rot = |a: f64| Matrix2::new(a.cos(), -a.sin(), a.sin(), a.cos());
    rot(theta) * Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp()) * rot(phi)
}

/// `sqrt(b)·M^{-1/2}` for a 2×2 symmetric positive definite block with `det M = b²`.
fn whitening(block: &Matrix2<f64>, b: f64) -> Result<Matrix2<f64>> {
    let eig = SymmetricEigen::try_new((block + block.transpose()) * 0.5, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| numerical("eigen-solver did not converge"))?;
    let inv_sqrt = Matrix2::from_diagonal(&eig.eigenvalues.map(|l| (b / l).sqrt()));
    Ok(eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose())
}

/// Recovers `{b1, b2, c, d}` from an arbitrary physical covariance matrix.
///
/// Each local block is whitened to `b_j·I` by a local symplectic map; the
/// remaining freedom is a pair of rotations, so `c` and `|d|` are the
/// singular values of the transformed cross block and `d` carries the sign
/// of `det C`.
pub fn extract_standard_params(cm: &CovarianceMatrix) -> Result<StandardFormParams> {
    let report = validate(cm, EPS_PHYS)?;
    if !report.rs_satisfied {
        return Err(invalid(format!("covariance matrix is not physical (kappa_minus = {:?})", report.kappa_minus)));
    }
    let v = CovarianceMatrix(cm.symmetrized());
    let (v1, v2, cross) = (v.block_v1(), v.block_v2(), v.block_c());
    let mut b1 = v1.determinant().sqrt();
    let mut b2 = v2.determinant().sqrt();
    let w1 = whitening(&v1, b1)?;
    let w2 = whitening(&v2, b2)?;
    let reduced = w1 * cross * w2.transpose();
    let det_c = reduced.determinant();
    let sigma_max = reduced.svd(false, false).singular_values.max();
    let sigma_min = if sigma_max > 0.0 { det_c.abs() / sigma_max } else { 0.0 };
    if b2 > b1 {
        std::mem::swap(&mut b1, &mut b2);
    }
    let sign = if det_c < 0.0 { -1.0 } else { 1.0 };
    Ok(StandardFormParams { b1, b2, c: sigma_max, d: sign * sigma_min.min(sigma_max) })
}

/// Recovers `(c, d)` from the local invariants `det C = c·d` and
/// `det V = (b1b2 − c²)(b1b2 − d²)`: `c²` and `d²` are the roots of
/// `t² − s·t + (det C)²` with `s = [(b1b2)² + (det C)² − det V]/(b1b2)`.
pub fn standard_params_from_invariants(b1: f64, b2: f64, det_c: f64, det_v: f64) -> Result<StandardFormParams> {
    let (b1, b2) = if b1 >= b2 { (b1, b2) } else { (b2, b1) };
    let g = b1 * b2;
    let s = (g * g + det_c * det_c - det_v) / g;
    let disc = s * s - 4.0 * det_c * det_c;
    if disc < -1e-9 {
        return Err(numerical(format!("negative discriminant {disc:e} in parameter extraction")));
    }
    let root = disc.max(0.0).sqrt();
    let sign = if det_c < 0.0 { -1.0 } else { 1.0 };
    if root <= 1e-10 {
        let c = (0.5 * s).max(0.0).sqrt();
        return Ok(StandardFormParams { b1, b2, c, d: sign * c });
    }
    let large = 0.5 * (s + root);
    let small = if large > 0.0 { det_c * det_c / large } else { 0.0 };
    Ok(StandardFormParams { b1, b2, c: large.sqrt(), d: sign * small.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn example() -> StandardFormParams {
        StandardFormParams::new(1.0, 0.8, 0.5, -0.3)
    }

    /// Independent route: moduli of the complex eigenvalues of the real matrix `J·V`.
    fn kappas_by_schur(cm: &CovarianceMatrix) -> (f64, f64) {
        let jv = symplectic_form() * cm.matrix();
        let mut moduli: Vec<f64> = jv.complex_eigenvalues().iter().map(|z| z.norm()).collect();
        moduli.sort_by(f64::total_cmp);
        (0.5 * (moduli[2] + moduli[3]), 0.5 * (moduli[0] + moduli[1]))
    }

    #[test]
    fn vacuum_is_physical() {
        let r = validate(&CovarianceMatrix::vacuum(), EPS_PHYS).unwrap();
        assert!(r.symmetric && r.positive_definite && r.rs_satisfied);
        assert_relative_eq!(r.kappa_minus.unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn sub_vacuum_violates_uncertainty() {
        let cm = CovarianceMatrix::new(Matrix4::identity() * 0.25);
        let r = validate(&cm, EPS_PHYS).unwrap();
        assert!(r.positive_definite);
        assert!(!r.rs_satisfied);
        assert_relative_eq!(r.kappa_minus.unwrap(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn tmsv_is_pure() {
        let cm = build_standard_cm(&StandardFormParams::tmsv(0.5));
        let r = validate(&cm, EPS_PHYS).unwrap();
        assert!(r.rs_satisfied);
        assert!((r.kappa_minus.unwrap() - 0.5).abs() < 1e-10);
        let (_, km) = kappas_by_schur(&cm);
        assert!((km - 0.5).abs() < 1e-10);
    }

    #[test]
    fn validate_rejects_bad_input() {
        let mut m = Matrix4::identity() * 0.5;
        m[(0, 1)] = f64::NAN;
        assert!(matches!(validate(&CovarianceMatrix::new(m), EPS_PHYS), Err(crate::Error::InvalidInput(_))));
        let mut m = Matrix4::identity() * 0.5;
        m[(0, 1)] = 1e-6;
        assert!(matches!(validate(&CovarianceMatrix::new(m), EPS_PHYS), Err(crate::Error::InvalidInput(_))));
        let mut m = Matrix4::identity() * 0.5;
        m[(0, 1)] = 1e-11;
        let r = validate(&CovarianceMatrix::new(m), EPS_PHYS).unwrap();
        assert!(!r.symmetric && r.rs_satisfied);
    }

    #[test]
    fn not_positive_definite_has_no_kappa() {
        let cm = CovarianceMatrix::new(Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, 1.0, 1.0)));
        let r = validate(&cm, EPS_PHYS).unwrap();
        assert!(!r.positive_definite && !r.rs_satisfied && r.kappa_minus.is_none());
    }

    #[test]
    fn eigenvalues_match_closed_form() {
        let p = example();
        let (kp, km) = symplectic_eigenvalues(&build_standard_cm(&p)).unwrap();
        let s = spectrum(&p).unwrap();
        assert!((kp - s.kappa_plus).abs() < 1e-10);
        assert!((km - s.kappa_minus).abs() < 1e-10);
        let (kp2, km2) = kappas_by_schur(&build_standard_cm(&p));
        assert!((kp - kp2).abs() < 1e-10 && (km - km2).abs() < 1e-10);
        let (kp, km) = symplectic_eigenvalues(&CovarianceMatrix::vacuum()).unwrap();
        assert_relative_eq!(kp, 0.5, epsilon = 1e-14);
        assert_relative_eq!(km, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn partial_transpose_flips_d() {
        let p = example();
        assert_eq!(partial_transpose_params(&p), StandardFormParams::new(1.0, 0.8, 0.5, 0.3));
        assert_eq!(partial_transpose_params(&partial_transpose_params(&p)), p);
        let t = StandardFormParams::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(partial_transpose_params(&t), t);
    }

    #[test]
    fn vacuum_spectrum() {
        let s = spectrum(&StandardFormParams::VACUUM).unwrap();
        for k in [s.kappa_plus, s.kappa_minus, s.kappa_plus_pt, s.kappa_minus_pt] {
            assert_relative_eq!(k, 0.5, epsilon = 1e-15);
        }
        assert_eq!(s.d_inv, 0.0);
        assert_eq!(s.d_pt, 0.0);
        assert_eq!(s.det_v, 1.0 / 16.0);
    }

    #[test]
    fn symmetric_threshold_spectrum() {
        let p = StandardFormParams::symmetric(1.0, 0.5, -0.5);
        let s = spectrum(&p).unwrap();
        assert_relative_eq!(s.kappa_minus_pt, 0.5, epsilon = 1e-14);
        assert!(s.d_pt.abs() < 1e-15);
        let (_, km_pt) = kappas_by_schur(&build_standard_cm(&p).partial_transpose());
        assert!((km_pt - 0.5).abs() < 1e-10);
    }

    #[test]
    fn tmsv_partial_transpose_eigenvalue() {
        let r = 0.5;
        let p = StandardFormParams::tmsv(r);
        let s = spectrum(&p).unwrap();
        assert!((s.kappa_minus_pt - (-2.0 * r).exp() / 2.0).abs() < 1e-12);
        let pt = build_standard_cm(&p).partial_transpose();
        let (_, km) = symplectic_eigenvalues(&pt).unwrap();
        assert!((km - s.kappa_minus_pt).abs() < 1e-10);
    }

    #[test]
    fn extract_round_trip() {
        let p = example();
        let q = extract_standard_params(&build_standard_cm(&p)).unwrap();
        assert_relative_eq!(q.b1, p.b1, epsilon = 1e-14);
        assert_relative_eq!(q.b2, p.b2, epsilon = 1e-14);
        assert_relative_eq!(q.c, p.c, epsilon = 1e-14);
        assert_relative_eq!(q.d, p.d, epsilon = 1e-14);
        let v = extract_standard_params(&CovarianceMatrix::vacuum()).unwrap();
        assert_eq!(v, StandardFormParams::VACUUM);
    }

    #[test]
    fn extract_swaps_modes() {
        let p = example();
        let cm = build_standard_cm(&p);
        let swapped = CovarianceMatrix::from_rows(
            {
                let r = cm.to_rows(Ordering::Q1P1Q2P2);
                let perm = [2, 3, 0, 1];
                let mut out = [[0.0; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        out[i][j] = r[perm[i]][perm[j]];
                    }
                }
                out
            },
            Ordering::Q1P1Q2P2,
        );
        let q = extract_standard_params(&swapped).unwrap();
        assert!((q.b1 - 1.0).abs() < 1e-14 && (q.b2 - 0.8).abs() < 1e-14);
        assert!((q.d + 0.3).abs() < 1e-14);
    }

    #[test]
    fn extract_rejects_unphysical() {
        let cm = CovarianceMatrix::new(Matrix4::identity() * 0.25);
        assert!(matches!(extract_standard_params(&cm), Err(crate::Error::InvalidInput(_))));
    }

    #[test]
    fn invariant_route_agrees() {
        let p = example();
        let q = standard_params_from_invariants(p.b1, p.b2, p.c * p.d, p.det_v()).unwrap();
        assert!((q.c - p.c).abs() < 1e-12 && (q.d - p.d).abs() < 1e-12);
        let sts = StandardFormParams::new(1.0, 0.8, 0.5, -0.5);
        let q = standard_params_from_invariants(sts.b1, sts.b2, sts.c * sts.d, sts.det_v()).unwrap();
        assert!((q.c - 0.5).abs() < 1e-7 && (q.d + 0.5).abs() < 1e-7);
    }

    #[test]
    fn scaled_standard_entries() {
        let p = example();
        let u = ScalingFactors::new(2.0, 1.5).unwrap();
        let cm = build_scaled_standard_cm(&p, &u);
        assert_relative_eq!(cm.get(0, 0), 2.0, epsilon = 1e-15);
        assert_relative_eq!(cm.get(3, 3), 0.8 / 1.5, epsilon = 1e-15);
        assert_relative_eq!(cm.get(0, 2), 0.5 * 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(build_scaled_standard_cm(&p, &ScalingFactors::IDENTITY), build_standard_cm(&p));
        let q = extract_standard_params(&cm).unwrap();
        assert!((q.c - p.c).abs() < 1e-10 && (q.d - p.d).abs() < 1e-10 && (q.b2 - p.b2).abs() < 1e-10);
        let (kp, km) = symplectic_eigenvalues(&cm).unwrap();
        let s = spectrum(&p).unwrap();
        assert!((kp - s.kappa_plus).abs() < 1e-10 && (km - s.kappa_minus).abs() < 1e-10);
        assert!(ScalingFactors::new(0.5, 1.0).is_err());
    }

    #[test]
    fn local_symplectic_actions() {
        let cm = build_standard_cm(&example());
        let id = Matrix2::identity();
        assert_eq!(apply_local_symplectic(&cm, &id, &id).unwrap(), cm);
        let r: f64 = 0.3;
        let sq = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
        let out = apply_local_symplectic(&CovarianceMatrix::vacuum(), &sq, &id).unwrap();
        assert_relative_eq!(out.get(0, 0), (2.0 * r).exp() / 2.0, epsilon = 1e-15);
        let bad = Matrix2::new(2.0, 0.0, 0.0, 1.0);
        assert!(apply_local_symplectic(&cm, &bad, &id).is_err());
    }

    #[test]
    fn alternate_ordering_permutes() {
        let p = example();
        let cm = build_standard_cm(&p);
        let rows = cm.to_rows(Ordering::Q1Q2P1P2);
        assert_eq!(rows[0][1], p.c);
        assert_eq!(rows[2][3], p.d);
        assert_eq!(CovarianceMatrix::from_rows(rows, Ordering::Q1Q2P1P2), cm);
        let json = serde_json::to_string(&cm.to_json(Ordering::Q1P1Q2P2)).unwrap();
        assert!(json.starts_with("{\"ordering\":\"q1p1q2p2\""));
    }

    #[test]
    fn parameter_checks() {
        assert!(example().check(EPS_PHYS).is_ok());
        assert!(StandardFormParams::new(0.8, 1.0, 0.1, 0.0).check(EPS_PHYS).is_err());
        assert!(StandardFormParams::new(1.0, 1.0, 0.1, 0.2).check(EPS_PHYS).is_err());
        assert!(StandardFormParams::new(1.0, 0.4, 0.0, 0.0).check(EPS_PHYS).is_err());
        assert!(StandardFormParams::symmetric(1.0, 0.9, -0.9).check(EPS_PHYS).is_err());
    }
}
