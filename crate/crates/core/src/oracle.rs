//! Brute-force reference: derivative-free minimization and finite differences.
//!
//! Nothing here knows about the closed forms; the objectives are the raw
//! correlation functions, so agreement with the closed forms is evidence.

use serde::{Deserialize, Serialize};

use crate::error::{numerical, Result};
use crate::indicators::{e_function, f_function, g_function};
use crate::sfii::k_function;
use crate::symplectic::{ScalingFactors, StandardFormParams};

/// One coordinate of a search box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    /// Search uniformly in `ln x` instead of `x` (requires `lo > 0`).
    pub log: bool,
    /// `lo` is a domain bound, never widened.
    pub hard_lo: bool,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64) -> Axis {
        Axis { lo, hi, log: false, hard_lo: false }
    }

    pub fn log(lo: f64, hi: f64) -> Axis {
        Axis { lo, hi, log: true, hard_lo: false }
    }

    pub fn hard_lo(mut self) -> Axis {
        self.hard_lo = true;
        self
    }

    /// Maps the unit coordinate to `x`. Outside `[0, 1]` the coordinate is
    /// folded back (mirror at each face) rather than clamped, so a simplex
    /// pushed against a face keeps its volume.
    fn to_x(&self, t: f64) -> f64 {
        let t = t.rem_euclid(2.0);
        let t = if t > 1.0 { 2.0 - t } else { t };
        if self.log {
            (self.lo.ln() + t * (self.hi.ln() - self.lo.ln())).exp()
        } else {
            self.lo + t * (self.hi - self.lo)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub grid_stage_value: f64,
}

/// Nelder–Mead coefficients: reflection, expansion, contraction, shrink.
const NM: (f64, f64, f64, f64) = (1.0, 2.0, 0.5, 0.5);
const SIMPLEX_TOL: f64 = 1e-9;
const RESTARTS: usize = 12;

pub fn default_grid_points(n: usize) -> usize {
    match n {
        1 => 256,
        2 => 64,
        _ => 32,
    }
}

struct Counted<'a> {
    f: &'a dyn Fn(&[f64]) -> f64,
    axes: &'a [Axis],
    evaluations: usize,
}

impl Counted<'_> {
    fn at(&mut self, t: &[f64]) -> Result<f64> {
        let x: Vec<f64> = t.iter().zip(self.axes).map(|(&ti, a)| a.to_x(ti)).collect();
        self.evaluations += 1;
        let v = (self.f)(&x);
        if !v.is_finite() {
            return Err(numerical(format!("objective is not finite at {x:?}")));
        }
        Ok(v)
    }
}

fn nelder_mead(obj: &mut Counted, start: &[f64], step: f64, max_iter: usize) -> Result<(Vec<f64>, f64, bool)> {
    let n = start.len();
    let (alpha, gamma, rho, sigma) = NM;
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] = if v[i] + step <= 1.0 { v[i] + step } else { v[i] - step };
        simplex.push(v);
    }
    let mut values = simplex.iter().map(|v| obj.at(v)).collect::<Result<Vec<f64>>>()?;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter <= SIMPLEX_TOL {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64).collect();
        let along =
            |coef: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + coef * (c - w)).collect() };
        let reflected = along(alpha);
        let fr = obj.at(&reflected)?;
        if fr < values[0] {
            let expanded = along(gamma);
            let fe = obj.at(&expanded)?;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (contracted, fc) = if fr < values[n] {
                let c = along(rho);
                let v = obj.at(&c)?;
                (c, v)
            } else {
                let c = along(-rho);
                let v = obj.at(&c)?;
                (c, v)
            };
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                for i in 1..=n {
                    let shrunk: Vec<f64> =
                        simplex[0].iter().zip(&simplex[i]).map(|(b, v)| b + sigma * (v - b)).collect();
                    values[i] = obj.at(&shrunk)?;
                    simplex[i] = shrunk;
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    Ok((simplex[best].clone(), values[best], converged))
}

/// Grid scan over the box followed by Nelder–Mead refinement from the best
/// grid point. Deterministic.
pub fn minimize(
    objective: &dyn Fn(&[f64]) -> f64,
    axes: &[Axis],
    grid_points: usize,
    refine_iterations: usize,
) -> Result<MinimizationResult> {
    let n = axes.len();
    if n == 0 || grid_points < 2 {
        return Err(crate::error::invalid("minimize needs at least one axis and two grid points"));
    }
    for a in axes {
        if !(a.lo.is_finite() && a.hi.is_finite() && a.lo < a.hi) || (a.log && a.lo <= 0.0) {
            return Err(crate::error::invalid(format!("bad search axis {a:?}")));
        }
    }
    let mut obj = Counted { f: objective, axes, evaluations: 0 };

    let mut best_t = vec![0.0; n];
    let mut best_v = f64::INFINITY;
    let mut idx = vec![0usize; n];
    let denom = (grid_points - 1) as f64;
    loop {
        let t: Vec<f64> = idx.iter().map(|&i| i as f64 / denom).collect();
        let v = obj.at(&t)?;
        if v < best_v {
            best_v = v;
            best_t = t;
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < grid_points {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == n {
                break;
            }
        }
        if k == n {
            break;
        }
    }
    let grid_stage_value = best_v;

    let mut point = best_t;
    let mut value = best_v;
    let mut converged = false;
    // restarts re-inflate the simplex to one grid cell, which frees a simplex
    // that collapsed against a clamped box face
    let step = 1.0 / denom;
    for _ in 0..RESTARTS {
        let (p, v, c) = nelder_mead(&mut obj, &point, step, refine_iterations)?;
        let improved = v < value - 1e-15 * value.abs();
        if v <= value {
            point = p;
            value = v;
        }
        converged = c;
        if c && !improved {
            break;
        }
    }
    Ok(MinimizationResult {
        argmin: point.iter().zip(axes).map(|(&t, a)| a.to_x(t)).collect(),
        value,
        evaluations: obj.evaluations,
        converged,
        grid_stage_value,
    })
}

/// Like [`minimize`], but widens any soft box edge the minimizer lands on
/// (upper edges ×10, lower edges ÷10) and searches again.
pub fn minimize_adaptive(objective: &dyn Fn(&[f64]) -> f64, axes: &[Axis]) -> Result<MinimizationResult> {
    minimize_adaptive_grid(objective, axes, default_grid_points(axes.len()))
}

/// [`minimize_adaptive`] with an explicit grid resolution.
pub fn minimize_adaptive_grid(
    objective: &dyn Fn(&[f64]) -> f64,
    axes: &[Axis],
    grid: usize,
) -> Result<MinimizationResult> {
    let mut axes = axes.to_vec();
    let mut evaluations = 0;
    for _ in 0..6 {
        let mut r = minimize(objective, &axes, grid, 500)?;
        evaluations += r.evaluations;
        let mut widened = false;
        for (a, &x) in axes.iter_mut().zip(&r.argmin) {
            let width = if a.log { (a.hi / a.lo).ln() } else { a.hi - a.lo };
            let from_hi = if a.log { (a.hi / x).ln() } else { a.hi - x };
            let from_lo = if a.log { (x / a.lo).ln() } else { x - a.lo };
            if from_hi <= 1e-6 * width {
                a.hi *= 10.0;
                widened = true;
            } else if from_lo <= 1e-6 * width && !a.hard_lo {
                a.lo /= 10.0;
                widened = true;
            }
        }
        if !widened {
            r.evaluations = evaluations;
            return Ok(r);
        }
    }
    Err(numerical("minimizer keeps escaping the search box"))
}

fn step_for(x: f64, rel_step: f64) -> Result<f64> {
    let h = rel_step * x.abs().max(1.0);
    if !(h > 0.0) || x + h == x {
        return Err(numerical(format!("finite-difference step underflows at {x}")));
    }
    Ok(h)
}

/// Central-difference gradient with per-axis step `rel_step·max(|x|, 1)`.
pub fn finite_diff_gradient(objective: &dyn Fn(&[f64]) -> f64, point: &[f64], rel_step: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(point.len());
    for i in 0..point.len() {
        let h = step_for(point[i], rel_step)?;
        let mut y = point.to_vec();
        y[i] = point[i] + h;
        let fp = objective(&y);
        y[i] = point[i] - h;
        let fm = objective(&y);
        out.push((fp - fm) / (2.0 * h));
    }
    Ok(out)
}

/// Central-difference Hessian, symmetrized.
pub fn finite_diff_hessian(objective: &dyn Fn(&[f64]) -> f64, point: &[f64], rel_step: f64) -> Result<Vec<Vec<f64>>> {
    let n = point.len();
    let h = point.iter().map(|&x| step_for(x, rel_step)).collect::<Result<Vec<f64>>>()?;
    let f0 = objective(point);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let eval = |si: f64, sj: f64| {
                let mut y = point.to_vec();
                y[i] += si * h[i];
                y[j] += sj * h[j];
                objective(&y)
            };
            m[i][j] = if i == j {
                let mut y = point.to_vec();
                y[i] = point[i] + h[i];
                let fp = objective(&y);
                y[i] = point[i] - h[i];
                (fp - 2.0 * f0 + objective(&y)) / (h[i] * h[i])
            } else {
                (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h[i] * h[j])
            };
            m[j][i] = m[i][j];
        }
    }
    Ok(m)
}

/// Minimum of `E(λ, μ)` over `λ, μ > 0`.
pub fn oracle_e(p: &StandardFormParams) -> Result<MinimizationResult> {
    minimize_adaptive(&|x: &[f64]| e_function(p, x[0], x[1]), &[Axis::log(0.05, 20.0), Axis::log(0.05, 20.0)])
}

/// Search axes for `(α², u1, u2)`.
pub fn f_axes(p: &StandardFormParams) -> [Axis; 3] {
    [
        Axis::log(0.05, 20.0),
        Axis::linear(1.0, (4.0 * p.b1).max(10.0)).hard_lo(),
        Axis::linear(1.0, (4.0 * p.b2).max(10.0)).hard_lo(),
    ]
}

/// Outer search over `outer_axes` whose objective is itself a search over
/// `inner_axes`. Returns the outer argmin followed by the inner argmin.
///
/// A joint simplex search stalls in curved valleys when the minimum sits
/// close to a hard box face; splitting the variables avoids that.
pub fn minimize_nested(
    objective: &dyn Fn(&[f64], &[f64]) -> f64,
    outer_axes: &[Axis],
    outer_grid: usize,
    inner_axes: &[Axis],
    inner_grid: usize,
) -> Result<MinimizationResult> {
    let inner = |o: &[f64]| minimize_adaptive_grid(&|x: &[f64]| objective(o, x), inner_axes, inner_grid);
    let failure = std::cell::RefCell::new(None);
    let evaluations = std::cell::Cell::new(0);
    let outer = minimize_adaptive_grid(
        &|o: &[f64]| match inner(o) {
            Ok(r) => {
                evaluations.set(evaluations.get() + r.evaluations);
                r.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        outer_axes,
        outer_grid,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    let best = inner(&outer.argmin)?;
    let mut argmin = outer.argmin.clone();
    argmin.extend_from_slice(&best.argmin);
    Ok(MinimizationResult {
        argmin,
        value: best.value,
        evaluations: evaluations.get() + best.evaluations,
        converged: outer.converged && best.converged,
        grid_stage_value: outer.grid_stage_value,
    })
}

/// Minimum of `F(α², u1, u2)` over `α² > 0`, `u1, u2 ≥ 1`; argmin ordered `(α², u1, u2)`.
pub fn oracle_f(p: &StandardFormParams) -> Result<MinimizationResult> {
    let [alpha, u1, u2] = f_axes(p);
    let mut r = minimize_nested(
        &|u: &[f64], a: &[f64]| f_function(p, a[0], &ScalingFactors { u1: u[0], u2: u[1] }),
        &[u1, u2],
        16,
        &[alpha],
        24,
    )?;
    r.argmin.rotate_right(1);
    Ok(r)
}

/// Minimum of `G(ξ, η, u1)` over `ξ, η > 0`, `u1 ≥ 1`; argmin ordered `(ξ, η, u1)`.
pub fn oracle_g(p: &StandardFormParams) -> Result<MinimizationResult> {
    let mut r = minimize_nested(
        &|u: &[f64], x: &[f64]| g_function(p, x[0], x[1], u[0]),
        &[Axis::linear(1.0, (4.0 * p.b1).max(10.0)).hard_lo()],
        32,
        &[Axis::log(0.01, 200.0), Axis::log(0.01, 200.0)],
        12,
    )?;
    r.argmin.rotate_left(1);
    Ok(r)
}

/// Minimum of `K(α², u1, u2)` over `α²` at fixed scaling.
pub fn oracle_k_alpha(p: &StandardFormParams, u: &ScalingFactors) -> Result<MinimizationResult> {
    minimize_adaptive(&|x: &[f64]| k_function(p, x[0], u), &[Axis::log(0.05, 20.0)])
}
