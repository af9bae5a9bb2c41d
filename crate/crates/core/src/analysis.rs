//! Norm curves `p ↦ ‖λ_p(f)‖` and the checks run on them.
//!
//! Every inequality is evaluated on estimator lower bounds on both sides
//! with a relative tolerance. Exact matrix identities that a check also
//! relies on contribute a violation of at least 1 when they break.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::{push_quotient, random_element, GroupAlgebraElement};
use crate::error::{LabError, Result};
use crate::group::{quotient, FiniteGroup, SubgroupHandle};
use crate::operators::{commuting_square_residual, coset_block_structure, regular_matrix};
use crate::pnorm::{conjugate_exponent, estimate_pnorm, EstimatorConfig, PNormEstimate, MAX_P};
use crate::C64;

/// Relative tolerance for estimator-vs-estimator comparisons.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Residual allowed in the quotient commuting square.
pub const SQUARE_TOL: f64 = 1e-12;

pub const DEFAULT_GRID: [f64; 8] = [1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0];

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckDetail {
    pub inputs: BTreeMap<String, Value>,
    pub measured: BTreeMap<String, f64>,
}

impl CheckDetail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn measure(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub details: Vec<CheckDetail>,
}

impl CheckReport {
    pub fn new(check: &str, tolerance: f64, worst_violation: f64, details: Vec<CheckDetail>) -> Self {
        let worst_violation = worst_violation.max(0.0);
        Self {
            check: check.to_string(),
            pass: worst_violation <= tolerance,
            worst_violation,
            tolerance,
            details,
        }
    }

    /// Combines reports of the same check; the result passes iff all do.
    pub fn merge(check: &str, reports: Vec<CheckReport>) -> Self {
        let tolerance = reports.iter().map(|r| r.tolerance).fold(f64::INFINITY, f64::min);
        let pass = reports.iter().all(|r| r.pass);
        let worst = reports.iter().map(|r| r.worst_violation).fold(0.0, f64::max);
        let details = reports.into_iter().flat_map(|r| r.details).collect();
        let mut merged = Self::new(
            check,
            if tolerance.is_finite() { tolerance } else { 0.0 },
            worst,
            details,
        );
        merged.pass = pass;
        merged
    }
}

/// Violation charged for a broken exact identity.
fn exact_violation(mismatch: f64) -> f64 {
    if mismatch == 0.0 {
        0.0
    } else {
        1.0 + mismatch
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// `N_p(f)`: estimator lower bound for `‖λ_p(f)‖`.
pub fn regular_pnorm(f: &GroupAlgebraElement, p: f64, cfg: &EstimatorConfig) -> Result<PNormEstimate> {
    estimate_pnorm(&regular_matrix(f).entries, p, cfg)
}

fn coeffs_json(f: &GroupAlgebraElement) -> Value {
    Value::Array(f.coeffs().iter().map(|z| serde_json::json!([z.re, z.im])).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct NormCurve {
    pub group: String,
    #[serde(serialize_with = "serialize_element")]
    pub f: GroupAlgebraElement,
    pub grid: Vec<f64>,
    pub points: Vec<PNormEstimate>,
}

fn serialize_element<S: serde::Serializer>(f: &GroupAlgebraElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::io::serialize_complex_vec(f.coeffs(), s)
}

impl NormCurve {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|e| e.lower).collect()
    }

    /// Value at a grid point.
    pub fn value_at(&self, p: f64) -> Option<f64> {
        self.grid.iter().position(|&q| q == p).map(|i| self.points[i].lower)
    }

    /// CSV with columns `p,lower,upper,converged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,lower,upper,converged\n");
        for e in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                crate::io::csv_float(e.p),
                crate::io::csv_float(e.lower),
                crate::io::csv_float(e.upper),
                e.converged
            ));
        }
        out
    }
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(LabError::OutOfRange("empty p grid".into()));
    }
    if let Some(&p) = grid.iter().find(|&&p| !(1.0..=MAX_P).contains(&p)) {
        return Err(LabError::InvalidExponent(p));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::OutOfRange("p grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Estimates `‖λ_p(f)‖` at every grid point; `p = 1` and `p = 2` are exact.
pub fn norm_curve(f: &GroupAlgebraElement, grid: &[f64], cfg: &EstimatorConfig) -> Result<NormCurve> {
    validate_grid(grid)?;
    let m = regular_matrix(f).entries;
    let points = grid
        .par_iter()
        .map(|&p| estimate_pnorm(&m, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormCurve {
        group: f.group().name().to_string(),
        f: f.clone(),
        grid: grid.to_vec(),
        points,
    })
}

/// `value(q) ≤ value(p)` whenever `p ≤ q ≤ 2` or `2 ≤ q ≤ p`.
pub fn check_herz_monotone(curve: &NormCurve, tol: f64) -> CheckReport {
    let v = curve.values();
    let g = &curve.grid;
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let (p, q) = (g[i], g[j]);
            let ordered = (p <= q && q <= 2.0) || (2.0 <= q && q <= p);
            if i == j || !ordered {
                continue;
            }
            let violation = (v[j] - v[i]) / v[i].abs().max(f64::MIN_POSITIVE);
            if violation > worst {
                worst = violation;
            }
            if violation > tol {
                details.push(
                    CheckDetail::new()
                        .input("p", p)
                        .input("q", q)
                        .measure("value_p", v[i])
                        .measure("value_q", v[j]),
                );
            }
        }
    }
    if details.is_empty() {
        details.push(
            CheckDetail::new()
                .input("group", curve.group.clone())
                .input("grid", g.clone())
                .measure("min", v.iter().copied().fold(f64::INFINITY, f64::min))
                .measure("max", v.iter().copied().fold(0.0, f64::max)),
        );
    }
    CheckReport::new("herz-monotone", tol, worst, details)
}

/// Convexity of `1/p ↦ log value(p)` on consecutive grid triples.
pub fn check_log_convexity(curve: &NormCurve, tol: f64) -> Result<CheckReport> {
    let v = curve.values();
    let g = &curve.grid;
    if g.len() < 3 {
        return Err(LabError::OutOfRange(
            "log-convexity needs at least 3 grid points".into(),
        ));
    }
    if let Some(i) = v.iter().position(|&x| x.is_nan() || x <= 0.0) {
        return Err(LabError::OutOfRange(format!("curve value at p = {} is zero", g[i])));
    }
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for w in 0..g.len() - 2 {
        let (p0, p1, p2) = (g[w], g[w + 1], g[w + 2]);
        let theta = (1.0 / p0 - 1.0 / p1) / (1.0 / p0 - 1.0 / p2);
        let chord = (1.0 - theta) * v[w].ln() + theta * v[w + 2].ln();
        let violation = v[w + 1].ln() - chord;
        worst = worst.max(violation);
        details.push(
            CheckDetail::new()
                .input("p0", p0)
                .input("p1", p1)
                .input("p2", p2)
                .measure("theta", theta)
                .measure("log_value", v[w + 1].ln())
                .measure("chord", chord),
        );
    }
    Ok(CheckReport::new("log-convexity", tol, worst, details))
}

/// `‖λ_2(f)‖ ≤ value(p) ≤ ‖f‖₁` at every grid point.
pub fn check_curve_sandwich(curve: &NormCurve, tol: f64) -> Result<CheckReport> {
    let two = regular_pnorm(&curve.f, 2.0, &EstimatorConfig::default())?.lower;
    let l1 = curve.f.l1_norm();
    let mut worst = 0.0f64;
    for &v in &curve.values() {
        worst = worst.max(two - v).max(v - l1);
    }
    let detail = CheckDetail::new()
        .input("group", curve.group.clone())
        .measure("norm_2", two)
        .measure("l1", l1);
    Ok(CheckReport::new("curve-sandwich", tol, worst, vec![detail]))
}

fn check_open_exponent(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        Err(LabError::InvalidExponent(p))
    } else {
        Ok(())
    }
}

/// `N_p(f♯)` against `N_{p'}(f)`, plus `λ(f♯) = λ(f)ᵀ` entrywise.
pub fn check_sharp_duality(f: &GroupAlgebraElement, p: f64, cfg: &EstimatorConfig, tol: f64) -> Result<CheckReport> {
    check_open_exponent(p)?;
    let q = conjugate_exponent(p);
    let sharp_matrix = regular_matrix(&f.sharp()).entries;
    let transposed = regular_matrix(f).entries.transpose();
    let mismatch = crate::operators::max_abs_diff(&sharp_matrix, &transposed);
    let lhs = estimate_pnorm(&sharp_matrix, p, cfg)?.lower;
    let rhs = regular_pnorm(f, q, cfg)?.lower;
    let violation = relative_gap(lhs, rhs).max(exact_violation(mismatch));
    let detail = CheckDetail::new()
        .input("group", f.group().name())
        .input("p", p)
        .input("f", coeffs_json(f))
        .measure("norm_p_sharp", lhs)
        .measure("norm_p_conjugate", rhs)
        .measure("transpose_mismatch", mismatch);
    Ok(CheckReport::new("sharp-duality", tol, violation, vec![detail]))
}

fn is_abelian(g: &FiniteGroup) -> bool {
    g.abelian_structure().is_some() || g.is_commutative()
}

/// `|N_p(f) − N_{p'}(f)| / ‖f‖₁`.
pub fn duality_gap(f: &GroupAlgebraElement, p: f64, cfg: &EstimatorConfig) -> Result<f64> {
    let l1 = f.l1_norm();
    if l1 == 0.0 {
        return Ok(0.0);
    }
    let a = regular_pnorm(f, p, cfg)?.lower;
    let b = regular_pnorm(f, conjugate_exponent(p), cfg)?.lower;
    Ok((a - b).abs() / l1)
}

/// `N_p(f) = N_{p'}(f)` on abelian groups.
pub fn check_abelian_selfduality(
    f: &GroupAlgebraElement,
    p: f64,
    cfg: &EstimatorConfig,
    tol: f64,
) -> Result<CheckReport> {
    check_open_exponent(p)?;
    if !is_abelian(f.group()) {
        return Err(LabError::NotAbelian);
    }
    let a = regular_pnorm(f, p, cfg)?.lower;
    let b = regular_pnorm(f, conjugate_exponent(p), cfg)?.lower;
    let detail = CheckDetail::new()
        .input("group", f.group().name())
        .input("p", p)
        .input("f", coeffs_json(f))
        .measure("norm_p", a)
        .measure("norm_p_conjugate", b);
    Ok(CheckReport::new(
        "abelian-selfduality",
        tol,
        relative_gap(a, b),
        vec![detail],
    ))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    /// Estimator used inside the search; the winner is re-scored with
    /// [`EstimatorConfig::default`] at the same seed. It needs Gaussian
    /// starts: on a regular matrix the basis starts are translates of one
    /// another, and the search would otherwise climb into points where both
    /// deterministic starts miss the maximum.
    pub estimator: EstimatorConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            iters: 300,
            seed: 0,
            estimator: EstimatorConfig {
                restarts: 17,
                max_iters: 200,
                ..EstimatorConfig::default()
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessResult {
    pub group: String,
    pub p: f64,
    #[serde(serialize_with = "serialize_element")]
    pub f: GroupAlgebraElement,
    /// `|N_p(f) − N_{p'}(f)|` with `‖f‖₁ = 1`.
    pub gap: f64,
    pub norm_p: f64,
    pub norm_p_conjugate: f64,
    pub search_gap: f64,
}

fn normalized(f: &GroupAlgebraElement) -> GroupAlgebraElement {
    let l1 = f.l1_norm();
    if l1 == 0.0 {
        f.clone()
    } else {
        f.scale(C64::new(1.0 / l1, 0.0))
    }
}

fn from_params(group: &Arc<FiniteGroup>, params: &[f64]) -> GroupAlgebraElement {
    let coeffs = params.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    GroupAlgebraElement::new(Arc::clone(group), coeffs).expect("finite parameters")
}

/// Searches for `f` with `‖λ_p(f)‖ ≠ ‖λ_{p'}(f)‖` on a non-abelian group:
/// random starts, then coordinate ascent on the real and imaginary parts
/// with step halving from 0.5 down to 1e-6. One iteration is one
/// coordinate trial.
pub fn witness_search(group: &Arc<FiniteGroup>, p: f64, cfg: &SearchConfig) -> Result<WitnessResult> {
    check_open_exponent(p)?;
    if p == 2.0 {
        return Err(LabError::InvalidExponent(p));
    }
    if is_abelian(group) {
        return Err(LabError::Abelian);
    }
    if cfg.restarts == 0 {
        return Err(LabError::OutOfRange("search needs at least one restart".into()));
    }
    let est = cfg.estimator.with_seed(cfg.seed);
    est.validate()?;
    let objective = |params: &[f64]| -> f64 {
        let f = normalized(&from_params(group, params));
        duality_gap(&f, p, &est).unwrap_or(0.0)
    };

    let runs: Vec<(f64, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let start = random_element(Arc::clone(group), &mut rng);
            let mut params: Vec<f64> = start.coeffs().iter().flat_map(|z| [z.re, z.im]).collect();
            let mut value = objective(&params);
            let mut step = 0.5;
            let mut failures = 0;
            let dims = params.len();
            for it in 0..cfg.iters {
                if step < 1e-6 {
                    break;
                }
                let i = it % dims;
                let old = params[i];
                let mut moved = false;
                for dir in [1.0, -1.0] {
                    params[i] = old + dir * step;
                    let v = objective(&params);
                    if v > value {
                        value = v;
                        moved = true;
                        break;
                    }
                }
                if moved {
                    failures = 0;
                    // keep ‖f‖₁ = 1; the objective is scale invariant
                    let f = normalized(&from_params(group, &params));
                    params = f.coeffs().iter().flat_map(|z| [z.re, z.im]).collect();
                } else {
                    params[i] = old;
                    failures += 1;
                    if failures >= dims {
                        step /= 2.0;
                        failures = 0;
                    }
                }
            }
            (value, params)
        })
        .collect();

    let (search_gap, params) = runs
        .into_iter()
        .reduce(|b, c| if c.0 > b.0 { c } else { b })
        .expect("at least one restart");
    let f = normalized(&from_params(group, &params));
    let full = EstimatorConfig::default().with_seed(cfg.seed);
    let norm_p = regular_pnorm(&f, p, &full)?.lower;
    let norm_p_conjugate = regular_pnorm(&f, conjugate_exponent(p), &full)?.lower;
    Ok(WitnessResult {
        group: group.name().to_string(),
        p,
        gap: (norm_p - norm_p_conjugate).abs() / f.l1_norm(),
        f,
        norm_p,
        norm_p_conjugate,
        search_gap,
    })
}

/// `N_p^G(ιf) = N_p^H(f)` for `f` supported on `h`, plus the exact coset
/// block structure of `λ^G(ιf)`.
pub fn check_subgroup_isometry(
    h: &SubgroupHandle,
    f: &GroupAlgebraElement,
    p: f64,
    cfg: &EstimatorConfig,
    tol: f64,
) -> Result<CheckReport> {
    let local = f.restrict(h)?;
    let blocks = coset_block_structure(h, f)?;
    let big = regular_pnorm(f, p, cfg)?.lower;
    let small = regular_pnorm(&local, p, cfg)?.lower;
    let mismatch = blocks.max_off_block.max(blocks.max_block_deviation);
    let violation = relative_gap(big, small).max(exact_violation(mismatch));
    let detail = CheckDetail::new()
        .input("group", f.group().name())
        .input("subgroup", h.member_ids().to_vec())
        .input("p", p)
        .input("f", coeffs_json(f))
        .measure("norm_group", big)
        .measure("norm_subgroup", small)
        .measure("block_mismatch", mismatch)
        .measure("blocks", blocks.block_count as f64);
    Ok(CheckReport::new("subgroup-isometry", tol, violation, vec![detail]))
}

/// `N_p^{G/N}(T_N f) ≤ N_p^G(f)` and the commuting square
/// `λ(T_N f)·P_N = P_N·λ(f)` on `ℓ(G)`.
pub fn check_quotient_contraction(
    n: &SubgroupHandle,
    f: &GroupAlgebraElement,
    p: f64,
    cfg: &EstimatorConfig,
    tol: f64,
) -> Result<CheckReport> {
    let q = quotient(n)?;
    let pushed = push_quotient(n, &q, f)?;
    let residual = commuting_square_residual(n, f)?;
    let top = regular_pnorm(f, p, cfg)?.lower;
    let bottom = regular_pnorm(&pushed, p, cfg)?.lower;
    let excess = (bottom - top) / top.max(f64::MIN_POSITIVE);
    let square = if residual <= SQUARE_TOL { 0.0 } else { 1.0 + residual };
    let detail = CheckDetail::new()
        .input("group", f.group().name())
        .input("normal_subgroup", n.member_ids().to_vec())
        .input("p", p)
        .input("f", coeffs_json(f))
        .measure("norm_group", top)
        .measure("norm_quotient", bottom)
        .measure("square_residual", residual);
    Ok(CheckReport::new(
        "quotient-contraction",
        tol,
        excess.max(square),
        vec![detail],
    ))
}
