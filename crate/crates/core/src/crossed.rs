//! The crossed product of `C₀(G)` by the translation action, realized in
//! its regular covariant representation on `ℓ^p(G×G)`.
//!
//! Full and reduced crossed products coincide for finite groups, so only
//! the represented algebra is built. The checks confirm that
//! `a_{x,y} = δ_x·u_{xy⁻¹}` form a system of matrix units made of spatial
//! partial isometries and that `‖ρ(Σ C[x][y]·a_{x,y})‖_p = ‖C‖_{p→p}`.

use std::sync::Arc;

use crate::analysis::{CheckDetail, CheckReport};
use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::operators::{crossed_matrix_unit, crossed_operator, crossed_unit_map, MAX_CROSSED_ORDER};
use crate::pnorm::{estimate_pnorm, exact_norm, EstimatorConfig};
use crate::{CMatrix, C64};

/// Largest group for which unit products are formed as dense matrices;
/// beyond it products are composed as partial maps.
const DENSE_PRODUCT_LIMIT: usize = 6;

#[derive(Clone, Debug)]
pub struct CrossedCoefficients {
    group: Arc<FiniteGroup>,
    c: CMatrix,
}

impl CrossedCoefficients {
    pub fn new(group: Arc<FiniteGroup>, c: CMatrix) -> Result<Self> {
        let n = group.order();
        if c.shape() != (n, n) {
            return Err(LabError::OutOfRange(format!("expected a {n}x{n} coefficient matrix")));
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LabError::NonFinite("crossed coefficient".into()));
        }
        Ok(Self { group, c })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.c
    }
}

fn check_size(g: &FiniteGroup) -> Result<()> {
    if g.order() > MAX_CROSSED_ORDER {
        Err(LabError::DimensionTooLarge {
            dim: g.order(),
            limit: MAX_CROSSED_ORDER,
        })
    } else {
        Ok(())
    }
}

fn compose(a: &[Option<usize>], b: &[Option<usize>]) -> Vec<Option<usize>> {
    // (a∘b)(col) = a(b(col))
    b.iter().map(|&m| m.and_then(|k| a[k])).collect()
}

/// `a_{s₁,t₁}·a_{t₁,t₂} = a_{s₁,t₂}`, `a_{s₁,t₁}·a_{s₂,t₂} = 0` for
/// `s₂ ≠ t₁`, and `Σ_x a_{x,x} = 1`, over all quadruples.
pub fn verify_matrix_units(g: &FiniteGroup) -> Result<CheckReport> {
    check_size(g)?;
    let n = g.order();
    let mut failures = 0usize;
    let mut checked = 0usize;
    if n <= DENSE_PRODUCT_LIMIT {
        let units: Vec<CMatrix> = (0..n * n)
            .map(|k| crossed_matrix_unit(g, k / n, k % n).map(|m| m.entries))
            .collect::<Result<_>>()?;
        let zero = CMatrix::zeros(n * n, n * n);
        for s1 in 0..n {
            for t1 in 0..n {
                for s2 in 0..n {
                    for t2 in 0..n {
                        let prod = &units[s1 * n + t1] * &units[s2 * n + t2];
                        let expected = if s2 == t1 { &units[s1 * n + t2] } else { &zero };
                        checked += 1;
                        if prod != *expected {
                            failures += 1;
                        }
                    }
                }
            }
        }
    } else {
        let maps: Vec<Vec<Option<usize>>> = (0..n * n).map(|k| crossed_unit_map(g, k / n, k % n)).collect();
        let empty = vec![None; n * n];
        for s1 in 0..n {
            for t1 in 0..n {
                for s2 in 0..n {
                    for t2 in 0..n {
                        let prod = compose(&maps[s1 * n + t1], &maps[s2 * n + t2]);
                        let expected = if s2 == t1 { &maps[s1 * n + t2] } else { &empty };
                        checked += 1;
                        if prod != *expected {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    let diag_sum = crossed_operator(g, &CMatrix::identity(n, n))?.entries;
    let identity_ok = diag_sum == CMatrix::identity(n * n, n * n);
    let detail = CheckDetail::new()
        .input("group", g.name())
        .measure("quadruples", checked as f64)
        .measure("failures", failures as f64)
        .measure("diagonal_sum_is_identity", if identity_ok { 1.0 } else { 0.0 });
    let violation = failures as f64 + if identity_ok { 0.0 } else { 1.0 };
    Ok(CheckReport::new("crossed-matrix-units", 0.0, violation, vec![detail]))
}

/// Every `ρ(a_{x,y})` is a 0/1 matrix with at most one nonzero per row and
/// column, and has norm 1 at `p ∈ {1, 2, ∞}` exactly and at `p ∈ {1.5, 3}`
/// by the estimator within `1e-8`.
pub fn verify_spatiality(g: &FiniteGroup, cfg: &EstimatorConfig) -> Result<CheckReport> {
    check_size(g)?;
    let n = g.order();
    let mut structural_failures = 0usize;
    let mut worst_norm = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            let m = crossed_matrix_unit(g, x, y)?.entries;
            let zero = C64::new(0.0, 0.0);
            let one = C64::new(1.0, 0.0);
            let entries_ok = m.iter().all(|&z| z == zero || z == one);
            let rows_ok = m.row_iter().all(|r| r.iter().filter(|&&z| z != zero).count() <= 1);
            let cols_ok = m.column_iter().all(|c| c.iter().filter(|&&z| z != zero).count() <= 1);
            if !(entries_ok && rows_ok && cols_ok) {
                structural_failures += 1;
            }
            for p in [1.0, 2.0, f64::INFINITY] {
                worst_norm = worst_norm.max((exact_norm(&m, p)? - 1.0).abs());
            }
            for p in [1.5, 3.0] {
                worst_norm = worst_norm.max((estimate_pnorm(&m, p, cfg)?.lower - 1.0).abs());
            }
        }
    }
    let detail = CheckDetail::new()
        .input("group", g.name())
        .measure("units", (n * n) as f64)
        .measure("structural_failures", structural_failures as f64)
        .measure("worst_norm_deviation", worst_norm);
    let violation = if structural_failures > 0 {
        1.0 + structural_failures as f64
    } else {
        worst_norm
    };
    Ok(CheckReport::new("crossed-spatiality", 1e-8, violation, vec![detail]))
}

/// `N_p(ρ(C))` against `N_p(C)` on `ℓ^p_{|G|}`.
pub fn check_mnp_isometry(
    coeffs: &CrossedCoefficients,
    p: f64,
    cfg: &EstimatorConfig,
    tol: f64,
) -> Result<CheckReport> {
    check_size(coeffs.group())?;
    if p.is_nan() || p < 1.0 {
        return Err(LabError::InvalidExponent(p));
    }
    let big = crossed_operator(coeffs.group(), coeffs.matrix())?;
    let rep = estimate_pnorm(&big.entries, p, cfg)?.lower;
    let direct = estimate_pnorm(coeffs.matrix(), p, cfg)?.lower;
    let gap = (rep - direct).abs() / rep.max(direct).max(f64::MIN_POSITIVE);
    let detail = CheckDetail::new()
        .input("group", coeffs.group().name())
        .input("p", p)
        .measure("norm_represented", rep)
        .measure("norm_matrix", direct);
    Ok(CheckReport::new("crossed-mnp-isometry", tol, gap, vec![detail]))
}
