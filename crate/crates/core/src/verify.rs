//! Property-based verification of every closed form against independent
//! references: brute-force minima, finite differences, direct eigenvalue
//! tests and randomized local transformations.
//!
//! Each `check_*` function covers one acceptance property and returns the
//! worst residual per metric. The `verify` CLI command and the integration
//! tests both run these.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::analyze;
use crate::identities::identity_residuals;
use crate::indicators::{
    banded_sign, e_function, e_m_closed, f_function, f_m_closed, f_product_quadratic, f_stationarity_residuals,
    g_function, g_m_closed, g_m_sum_form, g_m_value, g_stationarity_residuals, hessian_e, hessian_f,
    hessian_f_sts_minors, hessian_f_symmetric_minors, hessian_g, indicator_report, ln_e_gradient, variance_p_general,
    variance_q_general, HessianCheck,
};
use crate::oracle::{finite_diff_gradient, finite_diff_hessian, oracle_e, oracle_f, oracle_g};
use crate::sfii::{
    boundary_scaling_closed, classicality_check, f_uu, h_map, indicator_identity_check, phi, phi_upper_closed,
    solve_by_bisection, solve_standard_form_ii,
};
use crate::state_gen::{randomize_cm, Family, FamilySpec, Sampler};
use crate::symplectic::{spectrum, Ordering, ScalingFactors, StandardFormParams};
use crate::tolerances::{rel_diff, Tolerances};

/// `E_m` and `F_m` against `(κ−^PT)²` and `2κ−^PT` at the stationary point.
const CLOSED_FORM_AT_POINT: f64 = 1e-10;
const F_ORACLE: f64 = 1e-5;
const G_ORACLE_ABS: f64 = 1e-6;
const G_FORMS: f64 = 1e-10;
const STATIONARITY: f64 = 1e-8;
const SIGN_BAND: f64 = 1e-10;
const PHI_UPPER_SLACK: f64 = 1e-9;
const SYMMETRIC_ROOT: f64 = 1e-10;
const THRESHOLD_MATCH: f64 = 1e-8;
const INVARIANCE: f64 = 1e-8;
const MIN_ENTANGLED: usize = 300;
const SPOT_CHECKS: usize = 20;

/// Sample sizes per property.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub oracle: usize,
    pub mixed: usize,
    pub hessian: usize,
    pub invariance: usize,
    pub special: usize,
}

impl Counts {
    pub const FULL: Counts = Counts { oracle: 500, mixed: 1000, hessian: 200, invariance: 500, special: 100 };

    pub fn uniform(n: usize) -> Counts {
        Counts { oracle: n, mixed: n, hessian: n, invariance: n, special: n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub counts: Counts,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Negative control: perturbs the closed-form `E_m` by one part in a thousand.
    pub inject_fault: bool,
}

impl VerifyConfig {
    pub fn new(counts: Counts, seed: u64) -> VerifyConfig {
        VerifyConfig { counts, seed, tolerances: Tolerances::default(), inject_fault: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    /// Worst observed value (`1` for a failed flag).
    pub max: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub samples: usize,
    pub metrics: Vec<Metric>,
    /// First few offending inputs.
    pub failures: Vec<String>,
    pub passed: bool,
}

impl CheckResult {
    /// One-line human-readable summary.
    pub fn line(&self) -> String {
        let worst = self
            .metrics
            .iter()
            .map(|m| format!("{}={:.1e}/{:.0e}", m.name, m.max, m.tolerance))
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "[{}] {} ({}, n={}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.description,
            self.samples,
            worst
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub counts: Counts,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

struct Tracker {
    id: &'static str,
    description: &'static str,
    samples: usize,
    metrics: Vec<Metric>,
    failures: Vec<String>,
}

impl Tracker {
    fn new(id: &'static str, description: &'static str) -> Tracker {
        Tracker { id, description, samples: 0, metrics: Vec::new(), failures: Vec::new() }
    }

    fn metric(&mut self, name: &str, tolerance: f64) -> &mut Metric {
        if let Some(i) = self.metrics.iter().position(|m| m.name == name) {
            return &mut self.metrics[i];
        }
        self.metrics.push(Metric { name: name.into(), max: 0.0, tolerance, passed: true });
        self.metrics.last_mut().unwrap()
    }

    /// Requires `value ≤ tolerance`; NaN fails.
    fn at_most(&mut self, name: &str, value: f64, tolerance: f64, context: &dyn std::fmt::Debug) {
        let ok = value <= tolerance;
        let m = self.metric(name, tolerance);
        m.max = if value.is_nan() { f64::INFINITY } else { m.max.max(value) };
        if !ok {
            m.passed = false;
            if self.failures.len() < 10 {
                self.failures.push(format!("{name} = {value:e} > {tolerance:e} for {context:?}"));
            }
        }
    }

    fn flag(&mut self, name: &str, ok: bool, context: &dyn std::fmt::Debug) {
        self.at_most(name, if ok { 0.0 } else { 1.0 }, 0.0, context);
    }

    fn error(&mut self, what: &str, e: &crate::Error, context: &dyn std::fmt::Debug) {
        self.at_most(&format!("{what}_errors"), 1.0, 0.0, &format!("{e} for {context:?}"));
    }

    fn finish(self) -> CheckResult {
        let passed = self.metrics.iter().all(|m| m.passed);
        CheckResult {
            id: self.id.into(),
            description: self.description.into(),
            samples: self.samples,
            metrics: self.metrics,
            failures: self.failures,
            passed,
        }
    }
}

fn sampler(family: Family, seed: u64, bias: bool) -> Sampler {
    Sampler::new(FamilySpec { entangled_bias: bias, ..FamilySpec::new(family, seed) }).expect("static spec is valid")
}

/// Alternates unbiased and entangled-biased generic draws, keeping only `d < 0`.
pub fn negative_d_sample(seed: u64, n: usize) -> Vec<StandardFormParams> {
    let mut plain = sampler(Family::Generic, seed, false);
    let mut biased = sampler(Family::Generic, seed ^ 0x9e37_79b9_7f4a_7c15, true);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let s = if out.len() % 2 == 0 { &mut plain } else { &mut biased };
        let p = s.next_params().expect("generic sampling never stalls");
        if p.d < 0.0 && p.c > 0.0 {
            out.push(p);
        }
    }
    out
}

/// One unbiased generic draw (either sign of `d`) for every three
/// entangled-biased ones, so that roughly 40% of the sample is entangled.
pub fn mixed_sample(seed: u64, n: usize) -> Vec<StandardFormParams> {
    let mut plain = sampler(Family::Generic, seed, false);
    let mut biased = sampler(Family::Generic, seed ^ 0x9e37_79b9_7f4a_7c15, true);
    (0..n)
        .map(|i| {
            if i % 4 == 0 { &mut plain } else { &mut biased }.next_params().expect("generic sampling never stalls")
        })
        .collect()
}

fn family_sample(family: Family, seed: u64, n: usize) -> Vec<StandardFormParams> {
    let mut s = sampler(family, seed, false);
    (0..n).map(|_| s.next_params().expect("family sampling never stalls")).collect()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Closed-form `E_m` against brute force, its value at the stationary point,
/// stationarity and minimality on random arguments.
pub fn check_e_minimum(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("e_minimum", "normalized product E: closed minimum vs brute force");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    for p in negative_d_sample(cfg.seed, cfg.counts.oracle) {
        t.samples += 1;
        let (e, s) = match (e_m_closed(&p), spectrum(&p)) {
            (Ok(e), Ok(s)) => (e, s),
            (Err(err), _) | (_, Err(err)) => {
                t.error("closed_form", &err, &p);
                continue;
            }
        };
        let closed = if cfg.inject_fault { e.e_m * (1.0 + 1e-3) } else { e.e_m };
        match oracle_e(&p) {
            Ok(o) => t.at_most("vs_oracle", (closed - o.value).abs() / closed, cfg.tolerances.closed_vs_oracle, &p),
            Err(err) => t.error("oracle", &err, &p),
        }
        let at_point = e_function(&p, e.lambda_m, e.mu_m);
        t.at_most("at_point_vs_kappa", rel_diff(at_point, s.kappa_minus_pt.powi(2), 0.0), CLOSED_FORM_AT_POINT, &p);
        let g = ln_e_gradient(&p, e.lambda_m, e.mu_m);
        t.at_most("analytic_gradient", g[0].hypot(g[1]), STATIONARITY, &p);
        match finite_diff_gradient(&|x: &[f64]| e_function(&p, x[0], x[1]).ln(), &[e.lambda_m, e.mu_m], 1e-5) {
            Ok(g) => t.at_most("fd_gradient", g[0].hypot(g[1]), STATIONARITY, &p),
            Err(err) => t.error("fd", &err, &p),
        }
        for _ in 0..SPOT_CHECKS {
            let (l, m) = (log_uniform(&mut rng, 0.01, 100.0), log_uniform(&mut rng, 0.01, 100.0));
            t.at_most("minimality", (closed - e_function(&p, l, m)).max(0.0), 1e-9, &(p, l, m));
        }
    }
    t.finish()
}

/// Closed-form `F_m` against brute force plus the stationary-point relations.
pub fn check_f_minimum(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("f_minimum", "normalized sum F: closed minimum vs brute force");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    for p in negative_d_sample(cfg.seed, cfg.counts.oracle) {
        t.samples += 1;
        let (f, s) = match (f_m_closed(&p), spectrum(&p)) {
            (Ok(f), Ok(s)) => (f, s),
            (Err(err), _) | (_, Err(err)) => {
                t.error("closed_form", &err, &p);
                continue;
            }
        };
        match oracle_f(&p) {
            Ok(o) => t.at_most("vs_oracle", (f.f_m - o.value).abs() / f.f_m, F_ORACLE, &p),
            Err(err) => t.error("oracle", &err, &p),
        }
        let u = ScalingFactors { u1: f.u1m, u2: f.u2m };
        t.at_most(
            "at_point_vs_kappa",
            rel_diff(f_function(&p, f.alpha_m_sq, &u), 2.0 * s.kappa_minus_pt, 0.0),
            CLOSED_FORM_AT_POINT,
            &p,
        );
        let r = f_stationarity_residuals(&p, f.alpha_m_sq, &u);
        t.at_most("stationarity", r.iter().fold(0.0f64, |m, v| m.max(v.abs())), STATIONARITY, &p);
        let obj = |x: &[f64]| f_function(&p, x[0], &ScalingFactors { u1: x[1], u2: x[2] });
        match finite_diff_gradient(&obj, &[f.alpha_m_sq, f.u1m, f.u2m], 1e-5) {
            Ok(g) => t.at_most("fd_gradient", g.iter().fold(0.0f64, |m, v| m.max(v.abs())), STATIONARITY, &p),
            Err(err) => t.error("fd", &err, &p),
        }
        let a = f.alpha_m_sq.sqrt();
        let vq = variance_q_general(&p, &u, a, 1.0 / a);
        let vp = variance_p_general(&p, &u, a, 1.0 / a, 1.0);
        t.at_most("equal_variances", rel_diff(vq, vp, 1.0), 1e-9, &p);
        let q = f_product_quadratic(&p);
        t.flag("product_root_admissible", q.discriminant >= 0.0 && q.p_plus >= 1.0 - 1e-12, &p);
        t.at_most("product_root_matches", rel_diff(q.p_plus, f.u1m * f.u2m, 1.0), 1e-9, &p);
        for _ in 0..SPOT_CHECKS {
            let x = [
                log_uniform(&mut rng, 0.01, 100.0),
                1.0 + log_uniform(&mut rng, 1e-3, 50.0),
                1.0 + log_uniform(&mut rng, 1e-3, 50.0),
            ];
            t.at_most("minimality", (f.f_m - obj(&x)).max(0.0), 1e-9, &(p, x));
        }
    }
    t.finish()
}

/// Closed-form `G_m` against brute force, its sign, and the agreement of its
/// two algebraic forms.
pub fn check_g_minimum(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("g_minimum", "regularized sum G: closed minimum vs brute force");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    for p in negative_d_sample(cfg.seed, cfg.counts.oracle) {
        t.samples += 1;
        let value = g_m_value(&p);
        t.at_most("two_forms", (value - g_m_sum_form(&p)).abs() / value.abs().max(1.0), G_FORMS, &p);
        let sg = banded_sign(value, SIGN_BAND);
        let sd = banded_sign(p.simon_d_pt(), SIGN_BAND);
        t.flag("sign_matches_d_pt", sg == sd || sg == 0 || sd == 0, &p);
        let g = match g_m_closed(&p) {
            Ok(g) => g,
            // stationary point at infinity (b2 = 1/2 or the c-bound saturated)
            Err(crate::Error::DegenerateBranch(_)) => continue,
            Err(err) => {
                t.error("closed_form", &err, &p);
                continue;
            }
        };
        match oracle_g(&p) {
            Ok(o) => t.at_most("vs_oracle", (g.g_m - o.value).abs(), G_ORACLE_ABS, &p),
            Err(err) => t.error("oracle", &err, &p),
        }
        t.at_most(
            "at_point",
            (g_function(&p, g.xi_m, g.eta_m, g.u1m) - g.g_m).abs(),
            CLOSED_FORM_AT_POINT.max(1e-12 * g.u1m),
            &p,
        );
        let r = g_stationarity_residuals(&p, g.xi_m, g.eta_m, g.u1m);
        let scale = 1.0 + p.b1 * g.u1m.powf(1.5);
        t.at_most("stationarity", r.iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale, STATIONARITY, &p);
        for _ in 0..SPOT_CHECKS {
            let (x, y, u) =
                (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), 1.0 + log_uniform(&mut rng, 1e-3, 50.0));
            t.at_most("minimality", (g.g_m - g_function(&p, x, y, u)).max(0.0), 1e-9, &(p, x, y, u));
        }
    }
    t.finish()
}

/// `sign(f̃) = sign(D^PT)` and the identity tying them together.
pub fn check_f_tilde_equivalence(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("f_tilde_equivalence", "standard-form-II indicator f~ vs PPT invariant");
    let sample = mixed_sample(cfg.seed, cfg.counts.mixed);
    let entangled = sample.iter().filter(|p| p.simon_d_pt() < 0.0).count();
    // the share is only meaningful statistically; tiny runs just need one
    let n = cfg.counts.mixed;
    let needed = if n >= 100 { MIN_ENTANGLED.min(n * 3 / 10) } else { 1 };
    t.flag("entangled_share", entangled >= needed, &format!("{entangled} entangled of {}", sample.len()));
    for p in sample {
        t.samples += 1;
        let sol = match solve_standard_form_ii(&p) {
            Ok(s) => s,
            Err(err) => {
                t.error("solve", &err, &p);
                continue;
            }
        };
        if p.d < 0.0 {
            let sf = banded_sign(sol.f_tilde, SIGN_BAND);
            let sd = banded_sign(p.simon_d_pt(), SIGN_BAND);
            t.flag("sign_agrees", sf == sd || sf == 0 || sd == 0, &(p, sol.f_tilde));
        } else {
            t.at_most("nonnegative_for_d_ge_0", -sol.f_tilde, SIGN_BAND, &p);
        }
        let id = indicator_identity_check(&p, &sol);
        t.at_most("identity", id.residual / (cfg.tolerances.identity * id.lhs.abs() + 1e-12), 1.0, &(p, id));
        t.at_most("z_forms", id.z_residual / (1.0 + id.lhs.abs()), cfg.tolerances.identity, &p);
        t.at_most("twin_formulas", sol.twin_discrepancy(), cfg.tolerances.identity, &p);
        t.flag("prime_signs", sol.f_tilde_prime > 0.0 && sol.f_tilde_double_prime >= 0.0, &p);
        match f_uu(&p, &sol.scaling()) {
            Ok(v) => t.at_most("f_uu_matches", (v.value - sol.f_tilde).abs(), cfg.tolerances.identity, &p),
            Err(crate::Error::DegenerateBranch(_)) => {}
            Err(err) => t.error("f_uu", &err, &p),
        }
        match classicality_check(&p, &sol) {
            Ok(classical) => t.flag("classicality", classical == (sol.f_tilde >= -SIGN_BAND), &p),
            Err(err) => t.error("classicality", &err, &p),
        }
    }
    t.finish()
}

/// Endpoint signs of `φ`, location of the root and the residuals of the
/// standard-form-II equations.
pub fn check_root_bracketing(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("root_bracketing", "existence bracket and solution of the scaling equations");
    for p in mixed_sample(cfg.seed, cfg.counts.mixed) {
        t.samples += 1;
        let hi = 2.0 * p.b1;
        match (phi(&p, 1.0), phi(&p, hi)) {
            (Ok(lo_v), Ok(hi_v)) => {
                t.at_most("phi_at_1", lo_v, 0.0, &p);
                t.at_most("phi_at_2b1", -hi_v, PHI_UPPER_SLACK, &p);
                t.at_most("phi_at_2b1_closed_form", rel_diff(hi_v, phi_upper_closed(&p), 1.0), 1e-10, &p);
            }
            (Err(err), _) | (_, Err(err)) => t.error("phi", &err, &p),
        }
        let mut prev = 0.0;
        let mut increasing = true;
        for i in 0..=64 {
            let u = 1.0 + (hi - 1.0) * i as f64 / 64.0;
            let v = h_map(&p, u).unwrap_or(f64::NAN);
            increasing &= v > prev || (hi == 1.0 && v == prev);
            prev = v;
        }
        t.flag("h_increasing", increasing, &p);
        match solve_standard_form_ii(&p) {
            Ok(s) => {
                t.flag("u1_in_range", (1.0..=hi).contains(&s.u1_tilde), &(p, s.u1_tilde));
                t.flag("u2_in_range", (1.0..=2.0 * p.b2 * (1.0 + 1e-15)).contains(&s.u2_tilde), &(p, s.u2_tilde));
                t.at_most("eq1_residual", s.residual_eq1, cfg.tolerances.identity, &p);
                t.at_most("eq3_residual", s.residual_eq3, cfg.tolerances.identity, &p);
            }
            Err(err) => t.error("solve", &err, &p),
        }
    }
    t.finish()
}

/// Identities of the partially transposed spectrum.
pub fn check_spectral_identities(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("spectral_identities", "biquadratic and product identities of the PT spectrum");
    for p in mixed_sample(cfg.seed, cfg.counts.mixed) {
        t.samples += 1;
        match identity_residuals(&p) {
            Ok(r) => {
                t.at_most("biquadratic", r.biquadratic, cfg.tolerances.identity, &p);
                t.at_most("det_and_d_pt", r.det_product.max(r.d_pt_product), cfg.tolerances.identity, &p);
                t.at_most("c_squares", r.c_squares, cfg.tolerances.identity, &p);
                t.at_most("d_squares", r.d_squares, cfg.tolerances.identity, &p);
                t.at_most("cross_cd", r.cross_cd, cfg.tolerances.identity, &p);
                t.at_most("cross_dc", r.cross_dc, cfg.tolerances.identity, &p);
                t.at_most("g_brackets", r.g_brackets, cfg.tolerances.identity, &p);
            }
            Err(err) => t.error("identities", &err, &p),
        }
    }
    t.finish()
}

fn matrix_from(rows: &[Vec<f64>]) -> Matrix3<f64> {
    let n = rows.len();
    Matrix3::from_fn(|i, j| {
        if i < n && j < n {
            rows[i][j]
        } else if i == j {
            1.0
        } else {
            0.0
        }
    })
}

/// Leading principal minors `[m11, m11·m22 − m12², det]` of a 2×2 or 3×3 matrix.
fn leading_minors(rows: &[Vec<f64>]) -> Vec<f64> {
    let m = matrix_from(rows);
    let mut out = vec![m[(0, 0)], m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]];
    if rows.len() == 3 {
        out.push(m.determinant());
    }
    out
}

/// Minors in the order quoted by the closed forms: `F` uses `[H11, A33, det]`
/// (leading), `G` uses `[H33, A11, det]` (trailing).
fn trailing_minors(rows: &[Vec<f64>]) -> Vec<f64> {
    let m = matrix_from(rows);
    vec![m[(2, 2)], m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)], m.determinant()]
}

/// Worst entrywise error of `fd` against `closed`, each entry scaled by
/// `max(|h_ij|, sqrt(|h_ii h_jj|))`.
fn entry_error(closed: &[Vec<f64>], fd: &[Vec<f64>]) -> f64 {
    let n = closed.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let scale = closed[i][j].abs().max((closed[i][i] * closed[j][j]).abs().sqrt());
            worst = worst.max((closed[i][j] - fd[i][j]).abs() / scale);
        }
    }
    worst
}

fn minors_error(closed: &[f64], fd: &[f64]) -> f64 {
    closed.iter().zip(fd).map(|(a, b)| rel_diff(*a, *b, 0.0)).fold(0.0, f64::max)
}

/// Finite-difference Hessian compared with `closed` at the base step and two
/// larger steps; the best agreement is kept (larger steps tame rounding when
/// a curvature is tiny compared with the function value).
fn fd_against(
    objective: &dyn Fn(&[f64]) -> f64,
    h: &HessianCheck,
    step: f64,
    minors: fn(&[Vec<f64>]) -> Vec<f64>,
    closed_minors: &[f64],
) -> crate::Result<(f64, f64)> {
    let mut best = (f64::INFINITY, f64::INFINITY);
    for factor in [1.0, 3.0, 10.0] {
        let fd = finite_diff_hessian(objective, &h.stationary_point, step * factor)?;
        best.0 = best.0.min(entry_error(&h.entries, &fd));
        best.1 = best.1.min(minors_error(closed_minors, &minors(&fd)));
        if best.0 <= 1e-6 && best.1 <= 1e-6 {
            break;
        }
    }
    Ok(best)
}

fn cholesky_ok(rows: &[Vec<f64>]) -> bool {
    match rows.len() {
        2 => nalgebra::Matrix2::from_fn(|i, j| rows[i][j]).cholesky().is_some(),
        _ => matrix_from(rows).cholesky().is_some(),
    }
}

/// Closed-form Hessians of `ln E`, `F`, `G` against finite differences, and
/// their positive definiteness.
pub fn check_hessians(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("hessians", "closed-form Hessians vs finite differences, positive definite");
    let tol = cfg.tolerances.hessian_fd;
    let step = cfg.tolerances.fd_step;
    for p in negative_d_sample(cfg.seed.wrapping_add(7), cfg.counts.hessian) {
        t.samples += 1;
        match hessian_e(&p) {
            Ok(h) => {
                let obj = |x: &[f64]| e_function(&p, x[0], x[1]).ln();
                match fd_against(&obj, &h, step, leading_minors, &h.minors) {
                    Ok((e, m)) => {
                        t.at_most("e_entries", e, tol, &p);
                        t.at_most("e_minors", m, tol, &p);
                    }
                    Err(err) => t.error("e_fd", &err, &p),
                }
                t.flag("e_positive_definite", h.positive_definite && cholesky_ok(&h.entries), &p);
            }
            Err(err) => t.error("e_hessian", &err, &p),
        }
        match hessian_f(&p) {
            Ok(h) => {
                let obj = |x: &[f64]| f_function(&p, x[2], &ScalingFactors { u1: x[0], u2: x[1] });
                match fd_against(&obj, &h, step, leading_minors, &h.minors) {
                    Ok((e, m)) => {
                        t.at_most("f_entries", e, tol, &p);
                        t.at_most("f_minors", m, tol, &p);
                    }
                    Err(err) => t.error("f_fd", &err, &p),
                }
                t.flag("f_positive_definite", h.positive_definite && cholesky_ok(&h.entries), &p);
            }
            Err(err) => t.error("f_hessian", &err, &p),
        }
        match hessian_g(&p) {
            Ok(h) => {
                let obj = |x: &[f64]| g_function(&p, x[1], x[2], x[0]);
                match fd_against(&obj, &h, step, trailing_minors, &h.minors) {
                    Ok((e, m)) => {
                        t.at_most("g_entries", e, tol, &p);
                        t.at_most("g_minors", m, tol, &p);
                    }
                    Err(err) => t.error("g_fd", &err, &p),
                }
                t.flag("g_positive_definite", h.positive_definite && cholesky_ok(&h.entries), &p);
            }
            Err(crate::Error::DegenerateBranch(_)) => {}
            Err(err) => t.error("g_hessian", &err, &p),
        }
    }
    let special = (cfg.counts.hessian / 4).max(1);
    let sts = family_sample(Family::Sts, cfg.seed.wrapping_add(8), special);
    let sym = family_sample(Family::Symmetric, cfg.seed.wrapping_add(9), 4 * special)
        .into_iter()
        .filter(|p| p.d < 0.0)
        .take(special);
    let specialized =
        sts.into_iter().map(|p| (p, hessian_f_sts_minors(&p))).chain(sym.map(|p| (p, hessian_f_symmetric_minors(&p))));
    for (p, minors) in specialized {
        t.samples += 1;
        let (minors, h) = match (minors, hessian_f(&p)) {
            (Ok(m), Ok(h)) => (m, h),
            (Err(err), _) | (_, Err(err)) => {
                t.error("f_family_hessian", &err, &p);
                continue;
            }
        };
        let obj = |x: &[f64]| f_function(&p, x[2], &ScalingFactors { u1: x[0], u2: x[1] });
        match fd_against(&obj, &h, step, leading_minors, &minors) {
            Ok((_, m)) => t.at_most("f_family_minors", m, tol, &p),
            Err(err) => t.error("f_family_fd", &err, &p),
        }
        t.flag("f_family_minors_positive", minors.iter().all(|&m| m > 0.0), &p);
    }
    t.finish()
}

/// Sign changes of `φ` on a grid of spacing `≈ 1e-3`.
fn scan_sign_changes(p: &StandardFormParams) -> (usize, f64) {
    let hi = 2.0 * p.b1;
    let n = (((hi - 1.0) / 1e-3).ceil() as usize).max(1);
    let mut changes = 0;
    let mut min_after_start = f64::INFINITY;
    // rounding-level values count as zero and never start a sign change
    let mut prev = banded_sign(phi(p, 1.0).unwrap_or(f64::NAN), 1e-12);
    for i in 1..=n {
        let u = (1.0 + (hi - 1.0) * i as f64 / n as f64).min(hi);
        let v = phi(p, u).unwrap_or(f64::NAN);
        let s = banded_sign(v, 1e-12);
        if s != 0 {
            if prev != 0 && s != prev {
                changes += 1;
            }
            prev = s;
        }
        min_after_start = min_after_start.min(v);
    }
    (changes, min_after_start)
}

/// Closed-form scalings for the families where they are known.
pub fn check_special_families(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("special_families", "closed-form standard-form-II scalings of special families");
    let n = cfg.counts.special;
    for family in [Family::Sts, Family::Mts, Family::Thermal] {
        for p in family_sample(family, cfg.seed.wrapping_add(11), n) {
            t.samples += 1;
            match solve_standard_form_ii(&p) {
                Ok(s) => {
                    t.flag("equal_correlation_unit_scaling", s.u1_tilde == 1.0 && s.u2_tilde == 1.0, &p);
                    let expect = 4.0 * (((p.b1 - 0.5) * (p.b2 - 0.5)).sqrt() - p.c);
                    t.at_most("equal_correlation_f_tilde", (s.f_tilde - expect).abs(), 1e-12, &p);
                }
                Err(err) => t.error("solve", &err, &p),
            }
            if p.c > 0.0 {
                // φ(1) = 0 is the root; no other sign change may follow
                let (changes, min_v) = scan_sign_changes(&p);
                t.flag("equal_correlation_unique", changes == 0 && min_v >= -1e-12, &p);
            }
        }
    }
    for p in family_sample(Family::Symmetric, cfg.seed.wrapping_add(12), 2 * n)
        .into_iter()
        .filter(|p| p.c > p.d.abs())
        .take(n)
    {
        t.samples += 1;
        let expect = ((p.b1 - p.d.abs()) / (p.b1 - p.c)).sqrt();
        match (solve_standard_form_ii(&p), solve_by_bisection(&p)) {
            (Ok(s), Ok(b)) => {
                t.at_most(
                    "symmetric_closed",
                    (s.u1_tilde - expect).abs().max((s.u2_tilde - expect).abs()),
                    SYMMETRIC_ROOT,
                    &p,
                );
                t.at_most(
                    "symmetric_bisection",
                    (b.u1_tilde - expect).abs().max((b.u2_tilde - expect).abs()),
                    SYMMETRIC_ROOT,
                    &p,
                );
                let f_expect = 4.0 * (((p.b1 - p.c) * (p.b1 - p.d.abs())).sqrt() - 0.5);
                t.at_most("symmetric_f_tilde", (s.f_tilde - f_expect).abs(), 1e-12, &p);
            }
            (Err(err), _) | (_, Err(err)) => t.error("solve", &err, &p),
        }
        let (changes, _) = scan_sign_changes(&p);
        t.flag("symmetric_unique", changes == 1, &p);
    }
    let threshold = family_sample(Family::SeparabilityThreshold, cfg.seed.wrapping_add(13), n);
    let edge = family_sample(Family::PhysicalityEdge, cfg.seed.wrapping_add(14), 3 * n)
        .into_iter()
        .filter(|p| p.d > 0.0)
        .take(n);
    for p in threshold.into_iter().chain(edge) {
        t.samples += 1;
        let closed = match boundary_scaling_closed(&p) {
            Ok(u) => u,
            Err(err) => {
                t.error("boundary_closed", &err, &p);
                continue;
            }
        };
        match solve_standard_form_ii(&p) {
            Ok(s) => {
                t.at_most("boundary_f_tilde", s.f_tilde.abs(), THRESHOLD_MATCH, &p);
                t.at_most(
                    "boundary_scaling",
                    (s.u1_tilde - closed.0).abs().max((s.u2_tilde - closed.1).abs()),
                    THRESHOLD_MATCH,
                    &(p, s.u1_tilde, s.u2_tilde, closed),
                );
            }
            Err(err) => t.error("solve", &err, &p),
        }
    }
    t.finish()
}

/// Every reported invariant survives a random local symplectic conjugation.
pub fn check_local_invariance(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("local_invariance", "invariants under random local symplectic maps");
    for (i, p) in mixed_sample(cfg.seed.wrapping_add(21), cfg.counts.invariance).into_iter().enumerate() {
        t.samples += 1;
        let direct = (indicator_report(&p), solve_standard_form_ii(&p), spectrum(&p));
        let (ind, sol, spec) = match direct {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(err), _, _) | (_, Err(err), _) | (_, _, Err(err)) => {
                t.error("direct", &err, &p);
                continue;
            }
        };
        let cm = match randomize_cm(&p, cfg.seed.wrapping_add(i as u64)) {
            Ok(cm) => cm,
            Err(err) => {
                t.error("randomize", &err, &p);
                continue;
            }
        };
        let r = match analyze(&cm, Ordering::default(), &cfg.tolerances) {
            Ok(r) => r,
            Err(crate::analysis::AnalysisFailure::Error(err)) => {
                t.error("analyze", &err, &p);
                continue;
            }
            Err(other) => {
                t.flag("analyze_physical", false, &(p, other));
                continue;
            }
        };
        let q = r.params;
        let params = [(p.b1, q.b1), (p.b2, q.b2), (p.c, q.c), (p.d, q.d)];
        t.at_most("params", params.iter().map(|&(a, b)| rel_diff(a, b, 1.0)).fold(0.0, f64::max), INVARIANCE, &p);
        let s = r.spectrum;
        let kappas = [
            (spec.kappa_plus, s.kappa_plus),
            (spec.kappa_minus, s.kappa_minus),
            (spec.kappa_plus_pt, s.kappa_plus_pt),
            (spec.kappa_minus_pt, s.kappa_minus_pt),
        ];
        t.at_most("spectra", kappas.iter().map(|&(a, b)| rel_diff(a, b, 0.0)).fold(0.0, f64::max), INVARIANCE, &p);
        t.at_most("e_m", rel_diff(ind.e_m, r.indicators.e_m, 0.0), INVARIANCE, &p);
        t.at_most("f_m", rel_diff(ind.f_m, r.indicators.f_m, 0.0), INVARIANCE, &p);
        match (ind.g_m, r.indicators.g_m) {
            (Some(a), Some(b)) => t.at_most("g_m", rel_diff(a, b, 1.0), INVARIANCE, &p),
            (None, None) => {}
            _ => t.flag("g_m_presence", false, &p),
        }
        t.at_most("f_tilde", rel_diff(sol.f_tilde, r.standard_form_ii.f_tilde, 1.0), INVARIANCE, &p);
        t.flag("verdict", ind.verdict == r.summary.verdict, &p);
    }
    t.finish()
}

/// Separable verdicts of the four tests along a one-parameter path.
fn verdicts(p: &StandardFormParams) -> crate::Result<[bool; 4]> {
    let s = spectrum(p)?;
    let sol = solve_standard_form_ii(p)?;
    Ok([
        s.d_pt >= -crate::tolerances::D_PT_BOUNDARY,
        s.kappa_minus_pt.powi(2) >= 0.25 - 1e-12,
        2.0 * s.kappa_minus_pt >= 1.0 - 1e-12,
        sol.f_tilde >= -SIGN_BAND,
    ])
}

/// Index of the single separable → entangled flip of each test along a path.
fn flip_indices(path: &[StandardFormParams]) -> crate::Result<Vec<Option<usize>>> {
    let table = path.iter().map(verdicts).collect::<crate::Result<Vec<_>>>()?;
    Ok((0..4)
        .map(|k| {
            let flips: Vec<usize> = (1..table.len()).filter(|&i| table[i][k] != table[i - 1][k]).collect();
            match flips.as_slice() {
                [i] => Some(*i),
                _ => None,
            }
        })
        .collect())
}

/// `D^PT`, `E_m` vs 1/4, `F_m` vs 1 and `f̃` vs 0 change verdict in the same
/// grid cell along sweeps through the threshold.
pub fn check_threshold_chain(_cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tracker::new("threshold_chain", "all four separability tests flip in the same grid cell");
    let sweeps: Vec<(&str, Vec<StandardFormParams>)> = vec![
        (
            "symmetric b=1, d=-c",
            (0..=173)
                .map(|i| {
                    let c = 0.865 * i as f64 / 173.0;
                    StandardFormParams::symmetric(1.0, c, -c)
                })
                .collect(),
        ),
        (
            "symmetric b=1.4, d=-0.6c",
            (0..=200)
                .map(|i| {
                    let c = 1.3 * i as f64 / 200.0;
                    StandardFormParams::symmetric(1.4, c, -0.6 * c)
                })
                .collect(),
        ),
        (
            "b1=1.5, b2=1, d=-0.7c",
            (0..=200)
                .map(|i| {
                    let c = 1.1 * i as f64 / 200.0;
                    StandardFormParams::new(1.5, 1.0, c, -0.7 * c)
                })
                .collect(),
        ),
    ];
    for (name, path) in sweeps {
        let path: Vec<StandardFormParams> =
            path.into_iter().filter(|p| p.check(crate::tolerances::EPS_PHYS).is_ok()).collect();
        t.samples += path.len();
        match flip_indices(&path) {
            Ok(idx) => {
                let first = idx[0];
                t.flag("single_flip", first.is_some(), &name);
                t.flag("same_cell", idx.iter().all(|&i| i == first), &(name, idx.clone()));
            }
            Err(err) => t.error("sweep", &err, &name),
        }
    }
    t.finish()
}

pub fn run_all(cfg: &VerifyConfig) -> VerifySummary {
    let checks = vec![
        check_e_minimum(cfg),
        check_f_minimum(cfg),
        check_g_minimum(cfg),
        check_f_tilde_equivalence(cfg),
        check_root_bracketing(cfg),
        check_spectral_identities(cfg),
        check_hessians(cfg),
        check_special_families(cfg),
        check_local_invariance(cfg),
        check_threshold_chain(cfg),
    ];
    let passed = checks.iter().all(|c| c.passed);
    VerifySummary { seed: cfg.seed, counts: cfg.counts, checks, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig::new(Counts::uniform(12), 42)
    }

    #[test]
    fn small_suite_passes() {
        let s = run_all(&small());
        for c in &s.checks {
            assert!(c.passed, "{}\n{:#?}", c.line(), c.failures);
        }
    }

    #[test]
    fn fault_injection_is_caught() {
        let cfg = VerifyConfig { inject_fault: true, ..small() };
        let r = check_e_minimum(&cfg);
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.starts_with("vs_oracle")));
    }

    #[test]
    fn samples_respect_requested_signs() {
        assert!(negative_d_sample(1, 50).iter().all(|p| p.d < 0.0 && p.c > 0.0));
        let m = mixed_sample(1, 200);
        assert!(m.iter().any(|p| p.d > 0.0) && m.iter().any(|p| p.simon_d_pt() < 0.0));
    }
}
