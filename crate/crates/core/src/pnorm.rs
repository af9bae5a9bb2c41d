//! Operator norms `‖A‖_{p→p}` of complex matrices.
//!
//! Closed forms cover `p ∈ {1, 2, ∞}`. For other `p` the estimator runs a
//! multi-start dual fixed-point ascent (the matrix analogue of the power
//! method): every iterate gives a certified lower bound, and the
//! Riesz–Thorin bound `‖A‖₁^{1/p}·‖A‖_∞^{1−1/p}` gives an upper bound.
//! A grid-plus-refinement search over the unit sphere serves as an
//! independent oracle for dimensions up to 3.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::{CMatrix, C64};

/// Largest exponent accepted by the curve tooling; `|x|^{p−1}` stays finite
/// for unit vectors well beyond this.
pub const MAX_P: f64 = 64.0;

/// Restart agreement threshold that triggers one doubling of the restarts.
const AGREEMENT_TOL: f64 = 1e-6;

/// Number of canonical basis vectors used as starts.
const BASIS_STARTS: usize = 8;

/// The winning restart is continued with this stopping tolerance, for up to
/// `POLISH_FACTOR` times the iteration budget. Near ties between competing
/// maximizers slow the ascent down, and the per-restart stopping rule can
/// then leave a deficit of order `1e-9`.
const POLISH_TOL: f64 = 1e-14;
const POLISH_FACTOR: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimatorConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 500,
            rel_tol: 1e-10,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(LabError::OutOfRange("restarts and max_iters must be at least 1".into()));
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(LabError::OutOfRange("rel_tol must be positive".into()));
        }
        Ok(())
    }
}

/// A certified estimate of `‖A‖_{p→p}`.
#[derive(Clone, Debug, Serialize)]
pub struct PNormEstimate {
    pub p: f64,
    /// `‖A·witness‖_p / ‖witness‖_p`.
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
    pub restarts_used: usize,
    pub iterations: usize,
    #[serde(serialize_with = "crate::io::serialize_complex_vec")]
    pub witness: Vec<C64>,
}

impl PNormEstimate {
    /// The value used for downstream comparisons.
    pub fn value(&self) -> f64 {
        self.lower
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(LabError::InvalidExponent(p))
    } else {
        Ok(())
    }
}

/// Conjugate exponent `p'` with `1/p + 1/p' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn norm_unchecked(x: &[C64], p: f64) -> f64 {
    let max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 || p.is_infinite() {
        return max;
    }
    if p == 1.0 {
        return x.iter().map(|z| z.norm()).sum();
    }
    if p == 2.0 {
        let s: f64 = x.iter().map(|z| (z.norm() / max).powi(2)).sum();
        return max * s.sqrt();
    }
    let s: f64 = x.iter().map(|z| (z.norm() / max).powf(p)).sum();
    max * s.powf(1.0 / p)
}

/// `(Σ|xᵢ|^p)^{1/p}`, or `max|xᵢ|` for `p = ∞`.
pub fn vec_pnorm(x: &[C64], p: f64) -> Result<f64> {
    check_p(p)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LabError::NonFinite("vector entry".into()));
    }
    Ok(norm_unchecked(x, p))
}

fn dual_unchecked(x: &[C64], p: f64, norm: f64) -> Vec<C64> {
    x.iter()
        .map(|&z| {
            let m = z.norm();
            if m == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                z.conj() / m * (m / norm).powf(p - 1.0)
            }
        })
        .collect()
}

/// Norming functional of `x` in `ℓ^{p'}`: `‖y‖_{p'} = 1` and
/// `Re Σ xᵢyᵢ = ‖x‖_p`. Zero coordinates map to zero.
pub fn dual_vector(x: &[C64], p: f64) -> Result<Vec<C64>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::InvalidExponent(p));
    }
    let norm = vec_pnorm(x, p)?;
    if norm == 0.0 {
        return Err(LabError::ZeroVector);
    }
    Ok(dual_unchecked(x, p, norm))
}

/// `A·x` for column-major `A`.
pub(crate) fn matvec(a: &CMatrix, x: &[C64]) -> Vec<C64> {
    let mut y = vec![C64::new(0.0, 0.0); a.nrows()];
    matvec_into(a, x, &mut y);
    y
}

fn matvec_into(a: &CMatrix, x: &[C64], y: &mut [C64]) {
    let n = a.nrows();
    y.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
    for (col, &xj) in a.as_slice().chunks_exact(n).zip(x) {
        if xj.re == 0.0 && xj.im == 0.0 {
            continue;
        }
        for (yi, &aij) in y.iter_mut().zip(col) {
            *yi += aij * xj;
        }
    }
}

/// `Aᵀ·w` (transpose, no conjugation).
fn matvec_transpose_into(a: &CMatrix, w: &[C64], z: &mut [C64]) {
    for (zj, col) in z.iter_mut().zip(a.as_slice().chunks_exact(a.nrows())) {
        *zj = col.iter().zip(w).map(|(&aij, &wi)| aij * wi).sum();
    }
}

/// `‖Ax‖_p / ‖x‖_p`.
pub fn ratio(a: &CMatrix, x: &[C64], p: f64) -> f64 {
    let denom = norm_unchecked(x, p);
    if denom == 0.0 {
        return 0.0;
    }
    norm_unchecked(&matvec(a, x), p) / denom
}

/// Maximum absolute column sum.
pub fn norm_one(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute row sum.
pub fn norm_inf(a: &CMatrix) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value and a right singular vector for it.
fn spectral(a: &CMatrix) -> (f64, Vec<C64>) {
    let svd = a.clone().svd(false, true);
    let (idx, &sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, &0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let v_t = svd.v_t.expect("requested v_t");
    let v: Vec<C64> = v_t.row(idx).iter().map(|z| z.conj()).collect();
    (sigma, v)
}

/// Closed-form norm for `p ∈ {1, 2, ∞}`.
pub fn exact_norm(a: &CMatrix, p: f64) -> Result<f64> {
    if p == 1.0 {
        Ok(norm_one(a))
    } else if p == 2.0 {
        Ok(spectral(a).0)
    } else if p.is_infinite() && p > 0.0 {
        Ok(norm_inf(a))
    } else {
        Err(LabError::InvalidExponent(p))
    }
}

/// Riesz–Thorin bound `p ↦ ‖A‖₁^{1/p}·‖A‖_∞^{1−1/p}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationBound {
    pub norm_one: f64,
    pub norm_inf: f64,
}

impl InterpolationBound {
    pub fn at(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.norm_inf;
        }
        let t = 1.0 / p;
        if self.norm_one == 0.0 || self.norm_inf == 0.0 {
            return 0.0;
        }
        self.norm_one.powf(t) * self.norm_inf.powf(1.0 - t)
    }
}

pub fn interpolation_upper(a: &CMatrix) -> InterpolationBound {
    InterpolationBound {
        norm_one: norm_one(a),
        norm_inf: norm_inf(a),
    }
}

fn exact_estimate(a: &CMatrix, p: f64) -> PNormEstimate {
    let n = a.ncols();
    let witness = if p == 1.0 {
        let j = a
            .column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .enumerate()
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b })
            .0;
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        e
    } else if p.is_infinite() {
        // phases aligned with the heaviest row
        let i = a
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .enumerate()
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b })
            .0;
        (0..n)
            .map(|j| {
                let z = a[(i, j)];
                if z.norm() == 0.0 {
                    C64::new(1.0, 0.0)
                } else {
                    z.conj() / z.norm()
                }
            })
            .collect()
    } else {
        spectral(a).1
    };
    let lower = ratio(a, &witness, p);
    PNormEstimate {
        p,
        lower,
        upper: lower,
        converged: true,
        restarts_used: 1,
        iterations: 1,
        witness,
    }
}

/// Ratios of the dual fixed-point ascent for `(a, p)` from `start`, one per
/// iteration, together with the final iterate.
///
/// With `y = A·x`, `w = dual(y, p)` and `x⁺ = dual(Aᵀ·w, p')`, Hölder gives
/// `‖A·x⁺‖_p ≥ Re⟨x⁺, Aᵀw⟩ = ‖Aᵀw‖_{p'} ≥ Re⟨x, Aᵀw⟩ = ‖A·x‖_p`, so the
/// ratios never decrease in exact arithmetic.
pub fn ascent_trace(a: &CMatrix, p: f64, start: &[C64], max_iters: usize, rel_tol: f64) -> (Vec<f64>, Vec<C64>) {
    let q = conjugate_exponent(p);
    let n = a.nrows();
    let mut x: Vec<C64> = start.to_vec();
    let norm = norm_unchecked(&x, p);
    if norm == 0.0 {
        return (vec![0.0], x);
    }
    x.iter_mut().for_each(|z| *z /= norm);
    let mut x_norm = 1.0;
    let mut y = vec![C64::new(0.0, 0.0); n];
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut z = vec![C64::new(0.0, 0.0); n];
    let mut ratios = Vec::new();
    let mut best_x = x.clone();
    let mut best = f64::NEG_INFINITY;
    for it in 0..max_iters {
        matvec_into(a, &x, &mut y);
        let y_norm = dual_into(&y, p, &mut w);
        let r = y_norm / x_norm;
        if r > best {
            best = r;
            best_x.copy_from_slice(&x);
        }
        let stop = it >= 1 && r <= ratios.last().copied().unwrap_or(0.0) * (1.0 + rel_tol);
        ratios.push(r);
        if stop || r == 0.0 {
            break;
        }
        matvec_transpose_into(a, &w, &mut z);
        if dual_into(&z, q, &mut x) == 0.0 {
            break;
        }
        x_norm = norm_unchecked(&x, p);
    }
    (ratios, best_x)
}

/// Writes the unit norming functional of `src` in `ℓ^{p'}` into `out` and
/// returns `‖src‖_p`, with one `powf` per entry.
fn dual_into(src: &[C64], p: f64, out: &mut [C64]) -> f64 {
    let max = src.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt();
    if max == 0.0 {
        out.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        return 0.0;
    }
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(src) {
        let m = v.norm_sqr().sqrt();
        if m == 0.0 {
            *o = C64::new(0.0, 0.0);
            continue;
        }
        let t = m / max;
        let u = t.powf(p - 1.0);
        sum += u * t;
        *o = v.conj() * (u / m);
    }
    let norm = max * sum.powf(1.0 / p);
    // (m/norm)^{p-1} = (m/max)^{p-1}·(max/norm)^{p-1}
    let scale = (max / norm).powf(p - 1.0);
    out.iter_mut().for_each(|o| *o *= scale);
    norm
}

struct RestartOutcome {
    lower: f64,
    witness: Vec<C64>,
    /// Best iterate of the chain, in the space the chain ran in.
    state: Vec<C64>,
    converged: bool,
    iterations: usize,
}

fn start_vector(n: usize, k: usize, seed: u64) -> Vec<C64> {
    let basis = n.min(BASIS_STARTS);
    if k == 0 {
        vec![C64::new(1.0, 0.0); n]
    } else if k <= basis {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[k - 1] = C64::new(1.0, 0.0);
        e
    } else {
        // restart k owns stream k of the seed
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        (0..n)
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect()
    }
}

fn run_restart(
    a: &CMatrix,
    work: &CMatrix,
    transposed: bool,
    p: f64,
    k: usize,
    cfg: &EstimatorConfig,
) -> RestartOutcome {
    let start = start_vector(a.ncols(), k, cfg.seed);
    run_chain(a, work, transposed, p, &start, cfg.max_iters, cfg.rel_tol, cfg.rel_tol)
}

#[allow(clippy::too_many_arguments)]
fn run_chain(
    a: &CMatrix,
    work: &CMatrix,
    transposed: bool,
    p: f64,
    start: &[C64],
    max_iters: usize,
    rel_tol: f64,
    converged_tol: f64,
) -> RestartOutcome {
    let q = if transposed { conjugate_exponent(p) } else { p };
    let (ratios, best_x) = ascent_trace(work, q, start, max_iters, rel_tol);
    let converged = match ratios.as_slice() {
        [.., prev, last] => (last - prev).abs() <= converged_tol * last.abs().max(f64::MIN_POSITIVE),
        [only] => *only == 0.0,
        [] => false,
    };
    // for the transposed run, dual(Aᵀx, p') is a unit ℓ^p vector with
    // ‖A·w‖_p ≥ ‖Aᵀx‖_{p'}
    let witness = if transposed {
        let y = matvec(work, &best_x);
        let yn = norm_unchecked(&y, q);
        if yn == 0.0 {
            best_x.clone()
        } else {
            dual_unchecked(&y, q, yn)
        }
    } else {
        best_x.clone()
    };
    RestartOutcome {
        lower: ratio(a, &witness, p),
        witness,
        state: best_x,
        converged,
        iterations: ratios.len(),
    }
}

/// Certified lower bound (with witness) and interpolation upper bound for
/// `‖A‖_{p→p}`.
pub fn estimate_pnorm(a: &CMatrix, p: f64, cfg: &EstimatorConfig) -> Result<PNormEstimate> {
    check_p(p)?;
    cfg.validate()?;
    if !a.is_square() || a.nrows() == 0 {
        return Err(LabError::OutOfRange("estimator needs a nonempty square matrix".into()));
    }
    if p == 1.0 || p == 2.0 || p.is_infinite() {
        return Ok(exact_estimate(a, p));
    }
    let transposed = p < 2.0;
    let work = if transposed { a.transpose() } else { a.clone() };

    let run = |range: std::ops::Range<usize>| -> Vec<RestartOutcome> {
        range
            .into_par_iter()
            .map(|k| run_restart(a, &work, transposed, p, k, cfg))
            .collect()
    };
    let mut outcomes = run(0..cfg.restarts);
    let mut restarts_used = cfg.restarts;
    if !restarts_agree(&outcomes) {
        outcomes.extend(run(cfg.restarts..2 * cfg.restarts));
        restarts_used *= 2;
    }

    // first maximal restart wins
    let mut best = outcomes
        .into_iter()
        .reduce(|b, c| if c.lower > b.lower { c } else { b })
        .expect("at least one restart");
    let polished = run_chain(
        a,
        &work,
        transposed,
        p,
        &best.state,
        cfg.max_iters * POLISH_FACTOR,
        POLISH_TOL,
        cfg.rel_tol,
    );
    let iterations = best.iterations + polished.iterations;
    if polished.lower > best.lower {
        best = polished;
    } else {
        best.converged |= polished.converged;
    }
    best.iterations = iterations;
    let upper = interpolation_upper(a).at(p);
    Ok(PNormEstimate {
        p,
        lower: best.lower,
        upper,
        converged: best.converged,
        restarts_used,
        iterations: best.iterations,
        witness: best.witness,
    })
}

fn restarts_agree(outcomes: &[RestartOutcome]) -> bool {
    if outcomes.len() < 2 {
        return true;
    }
    let best = outcomes.iter().map(|o| o.lower).fold(0.0, f64::max);
    let close = outcomes
        .iter()
        .filter(|o| (best - o.lower) <= AGREEMENT_TOL * best.max(f64::MIN_POSITIVE))
        .count();
    close >= 2
}

/// Number of grid points refined by coordinate ascent in the oracle.
const ORACLE_CANDIDATES: usize = 8;

/// Exhaustive-grid oracle for `dim ≤ 3`: unit-sphere magnitudes from
/// spherical angles mapped by `u ↦ u^{2/p}`, relative phases on a uniform
/// grid, then coordinate ascent with step halving (0.1 down to 1e-8) on the
/// real and imaginary parts from the best grid points.
pub fn bruteforce_pnorm(a: &CMatrix, p: f64, resolution: usize) -> Result<f64> {
    check_p(p)?;
    let n = a.nrows();
    if n > 3 || !a.is_square() {
        return Err(LabError::DimensionTooLarge { dim: n, limit: 3 });
    }
    if resolution < 2 {
        return Err(LabError::OutOfRange("resolution must be at least 2".into()));
    }
    if n == 0 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(a[(0, 0)].norm());
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let theta = |i: usize| half_pi * i as f64 / (resolution - 1) as f64;
    let phase = |i: usize| C64::from_polar(1.0, std::f64::consts::TAU * i as f64 / resolution as f64);
    let mag = |u: f64| {
        if p.is_infinite() {
            u.signum()
        } else {
            u.abs().powf(2.0 / p)
        }
    };

    let mut top: Vec<(f64, Vec<C64>)> = Vec::with_capacity(ORACLE_CANDIDATES + 1);
    let mut consider = |x: Vec<C64>| {
        let r = ratio(a, &x, p);
        if top.len() < ORACLE_CANDIDATES || r > top.last().unwrap().0 {
            let pos = top.iter().position(|(v, _)| r > *v).unwrap_or(top.len());
            top.insert(pos, (r, x));
            top.truncate(ORACLE_CANDIDATES);
        }
    };
    let r = resolution;
    if n == 2 {
        for i in 0..r {
            let (c, s) = (theta(i).cos(), theta(i).sin());
            for k in 0..r {
                consider(vec![C64::new(mag(c), 0.0), phase(k) * mag(s)]);
            }
        }
    } else {
        for i in 0..r {
            for j in 0..r {
                let (t1, t2) = (theta(i), theta(j));
                let u = [t1.cos(), t1.sin() * t2.cos(), t1.sin() * t2.sin()];
                for k in 0..r {
                    for l in 0..r {
                        consider(vec![
                            C64::new(mag(u[0]), 0.0),
                            phase(k) * mag(u[1]),
                            phase(l) * mag(u[2]),
                        ]);
                    }
                }
            }
        }
    }
    let best = top.into_iter().map(|(v, x)| refine(a, p, x).max(v)).fold(0.0, f64::max);
    Ok(best)
}

fn refine(a: &CMatrix, p: f64, x: Vec<C64>) -> f64 {
    let mut params: Vec<f64> = x.iter().flat_map(|z| [z.re, z.im]).collect();
    let eval = |v: &[f64]| {
        let x: Vec<C64> = v.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        ratio(a, &x, p)
    };
    let mut value = eval(&params);
    let mut step = 0.1;
    while step >= 1e-8 {
        let mut improved = false;
        for i in 0..params.len() {
            for dir in [1.0, -1.0] {
                let old = params[i];
                params[i] = old + dir * step;
                let v = eval(&params);
                if v > value {
                    value = v;
                    improved = true;
                    break;
                }
                params[i] = old;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    value
}
