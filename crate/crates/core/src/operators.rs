//! Matrices of representations: left regular convolution, the averaging
//! projection onto `N`-invariant vectors, quotient compression, coset block
//! structure of induced operators, and the regular covariant representation
//! of the translation crossed product.
//!
//! Convention: `entries[(row, col)]` multiplies coordinate `col` of the
//! input, rows and columns follow element-id order.

use serde::Serialize;

use crate::algebra::{push_quotient, GroupAlgebraElement};
use crate::error::{LabError, Result};
use crate::group::{quotient, FiniteGroup, Quotient, SubgroupHandle};
use crate::{CMatrix, C64};

/// Largest group accepted by the crossed-product constructions.
pub const MAX_CROSSED_ORDER: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexKind {
    /// Row/column `s` is group element `s`.
    GroupElements,
    /// Row/column `g·n + h` is the pair `(g, h)`.
    GroupPairs,
    /// No group indexing.
    Plain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub index_kind: IndexKind,
}

impl OperatorMatrix {
    pub fn new(entries: CMatrix, index_kind: IndexKind) -> Result<Self> {
        if !entries.is_square() {
            return Err(LabError::OutOfRange("operator matrix must be square".into()));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(LabError::NonFinite("operator entry".into()));
        }
        Ok(Self { entries, index_kind })
    }

    pub fn plain(entries: CMatrix) -> Result<Self> {
        Self::new(entries, IndexKind::Plain)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn transpose(&self) -> Self {
        Self {
            entries: self.entries.transpose(),
            index_kind: self.index_kind,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            entries: &self.entries * &other.entries,
            index_kind: self.index_kind,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.entries, &other.entries)
    }
}

impl AsRef<CMatrix> for OperatorMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.entries
    }
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `λ(f)` with `entry[s][t] = f(s·t⁻¹)`; the same matrix for every `p`.
pub fn regular_matrix(f: &GroupAlgebraElement) -> OperatorMatrix {
    let g = f.group();
    let n = g.order();
    let entries = CMatrix::from_fn(n, n, |s, t| f.coeff(g.mul(s, g.inv(t))));
    OperatorMatrix {
        entries,
        index_kind: IndexKind::GroupElements,
    }
}

/// `P_N ξ = (1/|N|) Σ_{n∈N} ρ(n)ξ` with `(ρ(n)ξ)(g) = ξ(gn)`.
pub fn averaging_projection(n: &SubgroupHandle) -> Result<OperatorMatrix> {
    if !n.is_normal() {
        return Err(LabError::NotNormal);
    }
    let g = n.parent();
    let size = g.order();
    let w = C64::new(1.0 / n.order() as f64, 0.0);
    let mut entries = CMatrix::zeros(size, size);
    for s in g.elements() {
        for &m in n.member_ids() {
            entries[(s, g.mul(s, m))] += w;
        }
    }
    Ok(OperatorMatrix {
        entries,
        index_kind: IndexKind::GroupElements,
    })
}

/// Lifting `ℓ(G/N) → ℓ(G)`, `(Lη)(s) = η(sN)`, as a `|G| × |G/N|` matrix.
pub fn coset_lift(q: &Quotient) -> CMatrix {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    CMatrix::from_fn(q.projection.len(), q.group.order(), |s, c| {
        if q.projection[s] == c {
            one
        } else {
            zero
        }
    })
}

/// Restriction of coset-constant vectors `ℓ(G) → ℓ(G/N)` by evaluation at
/// the smallest coset member.
pub fn coset_restrict(q: &Quotient) -> CMatrix {
    let one = C64::new(1.0, 0.0);
    let mut r = CMatrix::zeros(q.group.order(), q.projection.len());
    let mut seen = vec![false; q.group.order()];
    for (s, &c) in q.projection.iter().enumerate() {
        if !seen[c] {
            seen[c] = true;
            r[(c, s)] = one;
        }
    }
    r
}

/// Regular matrix of `T_N f` over `G/N`, together with the quotient used.
pub fn quotient_compression(n: &SubgroupHandle, f: &GroupAlgebraElement) -> Result<(OperatorMatrix, Quotient)> {
    let q = quotient(n)?;
    let pushed = push_quotient(n, &q, f)?;
    Ok((regular_matrix(&pushed), q))
}

/// Largest entry of `L·λ(T_N f)·R·P_N − P_N·λ(f)`, both sides acting on
/// `ℓ(G)`.
pub fn commuting_square_residual(n: &SubgroupHandle, f: &GroupAlgebraElement) -> Result<f64> {
    let (compressed, q) = quotient_compression(n, f)?;
    let p = averaging_projection(n)?;
    let lhs = coset_lift(&q) * &compressed.entries * coset_restrict(&q) * &p.entries;
    let rhs = &p.entries * &regular_matrix(f).entries;
    Ok(max_abs_diff(&lhs, &rhs))
}

/// Outcome of comparing `λ^G(ιf)` with `|G:H|` copies of `λ^H(f)`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    /// Right cosets `H·g`; concatenated, they give the row permutation.
    pub cosets: Vec<Vec<usize>>,
    pub block_count: usize,
    pub block_size: usize,
    /// Largest entry outside the diagonal blocks after permuting.
    pub max_off_block: f64,
    /// Largest deviation of a diagonal block from `λ^H(f)`.
    pub max_block_deviation: f64,
    pub exact: bool,
}

/// Permutes `λ^G(f)` by right cosets of `h` and compares it with the
/// block-diagonal matrix `λ^H(f|_H) ⊕ ... ⊕ λ^H(f|_H)`.
pub fn coset_block_structure(h: &SubgroupHandle, f: &GroupAlgebraElement) -> Result<BlockReport> {
    let local = f.restrict(h)?;
    let block = regular_matrix(&local).entries;
    let full = regular_matrix(f).entries;
    let cosets = h.right_cosets();
    let k = h.order();
    let order: Vec<usize> = cosets.iter().flatten().copied().collect();
    let mut max_off_block = 0.0f64;
    let mut max_block_deviation = 0.0f64;
    for (i, &s) in order.iter().enumerate() {
        for (j, &t) in order.iter().enumerate() {
            let value = full[(s, t)];
            if i / k == j / k {
                max_block_deviation = max_block_deviation.max((value - block[(i % k, j % k)]).norm());
            } else {
                max_off_block = max_off_block.max(value.norm());
            }
        }
    }
    Ok(BlockReport {
        block_count: cosets.len(),
        block_size: k,
        cosets,
        max_off_block,
        max_block_deviation,
        exact: max_off_block == 0.0 && max_block_deviation == 0.0,
    })
}

fn check_crossed_size(g: &FiniteGroup) -> Result<()> {
    if g.order() > MAX_CROSSED_ORDER {
        Err(LabError::DimensionTooLarge {
            dim: g.order(),
            limit: MAX_CROSSED_ORDER,
        })
    } else {
        Ok(())
    }
}

/// Column-to-row map of `ρ(a_{x,y}) = π(δ_x)·v_{x·y⁻¹}` on `ℓ(G×G)`.
///
/// `v_s` translates the first coordinate, `π(δ_x)` keeps the pairs with
/// `g·h = x`. So `e_(g,h)` goes to `e_(x·y⁻¹·g, h)` when `g·h = y` and to
/// zero otherwise.
pub fn crossed_unit_map(g: &FiniteGroup, x: usize, y: usize) -> Vec<Option<usize>> {
    let n = g.order();
    let shift = g.mul(x, g.inv(y));
    (0..n * n)
        .map(|col| {
            let (a, b) = (col / n, col % n);
            (g.mul(a, b) == y).then(|| g.mul(shift, a) * n + b)
        })
        .collect()
}

/// `ρ(a_{x,y})` as a dense 0/1 matrix over group pairs.
pub fn crossed_matrix_unit(g: &FiniteGroup, x: usize, y: usize) -> Result<OperatorMatrix> {
    check_crossed_size(g)?;
    if x >= g.order() || y >= g.order() {
        return Err(LabError::OutOfRange(format!("element ids ({x}, {y})")));
    }
    let n = g.order();
    let mut entries = CMatrix::zeros(n * n, n * n);
    for (col, row) in crossed_unit_map(g, x, y).into_iter().enumerate() {
        if let Some(row) = row {
            entries[(row, col)] = C64::new(1.0, 0.0);
        }
    }
    Ok(OperatorMatrix {
        entries,
        index_kind: IndexKind::GroupPairs,
    })
}

/// `ρ(Σ C[x][y]·a_{x,y})`.
pub fn crossed_operator(g: &FiniteGroup, c: &CMatrix) -> Result<OperatorMatrix> {
    check_crossed_size(g)?;
    let n = g.order();
    if c.shape() != (n, n) {
        return Err(LabError::OutOfRange(format!(
            "coefficient matrix {:?} for a group of order {n}",
            c.shape()
        )));
    }
    if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LabError::NonFinite("crossed coefficient".into()));
    }
    let mut entries = CMatrix::zeros(n * n, n * n);
    for x in 0..n {
        for y in 0..n {
            let coeff = c[(x, y)];
            if coeff == C64::new(0.0, 0.0) {
                continue;
            }
            for (col, row) in crossed_unit_map(g, x, y).into_iter().enumerate() {
                if let Some(row) = row {
                    entries[(row, col)] += coeff;
                }
            }
        }
    }
    Ok(OperatorMatrix {
        entries,
        index_kind: IndexKind::GroupPairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{embed_subgroup, random_element, random_integer_element};
    use crate::group::{generated_subgroup, make_cyclic, make_dihedral, make_symmetric, subgroup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    fn s3() -> Arc<FiniteGroup> {
        arc(make_symmetric(3).unwrap())
    }

    fn a3(g: &Arc<FiniteGroup>) -> SubgroupHandle {
        generated_subgroup(g, &[g.labels().iter().position(|l| l == "231").unwrap()]).unwrap()
    }

    #[test]
    fn regular_matrix_examples() {
        let g = s3();
        let id = regular_matrix(&GroupAlgebraElement::delta(g.clone(), 0));
        assert_eq!(id.entries, CMatrix::identity(6, 6));
        for s in g.elements() {
            let m = regular_matrix(&GroupAlgebraElement::delta(g.clone(), s)).entries;
            for t in g.elements() {
                for u in g.elements() {
                    let expected = if u == g.mul(s, t) { 1.0 } else { 0.0 };
                    assert_eq!(m[(u, t)], c(expected, 0.0));
                }
            }
        }
        let z2 = arc(make_cyclic(2).unwrap());
        let (a, b) = (c(0.3, -1.0), c(2.0, 0.5));
        let f = GroupAlgebraElement::new(z2, vec![a, b]).unwrap();
        let m = regular_matrix(&f).entries;
        assert_eq!((m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]), (a, b, b, a));
    }

    #[test]
    fn regular_matrix_is_multiplicative_and_transposes_under_sharp() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in [s3(), arc(make_dihedral(4).unwrap())] {
            for _ in 0..20 {
                let f = random_element(g.clone(), &mut rng);
                let h = random_element(g.clone(), &mut rng);
                let lhs = regular_matrix(&f.convolve(&h).unwrap());
                let rhs = regular_matrix(&f).mul(&regular_matrix(&h));
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
                assert_eq!(
                    regular_matrix(&f.sharp()).entries,
                    regular_matrix(&f).entries.transpose()
                );
                // column sums of |λ(f)| are all ‖f‖₁
                let m = regular_matrix(&f).entries;
                for col in 0..g.order() {
                    let sum: f64 = m.column(col).iter().map(|z| z.norm()).sum();
                    assert!((sum - f.l1_norm()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn averaging_projection_examples() {
        let g = s3();
        let trivial = subgroup(&g, &[0]).unwrap();
        assert_eq!(averaging_projection(&trivial).unwrap().entries, CMatrix::identity(6, 6));
        let whole = subgroup(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        let p = averaging_projection(&whole).unwrap().entries;
        assert!(p.iter().all(|z| (z - c(1.0 / 6.0, 0.0)).norm() < 1e-16));
        let n = a3(&g);
        let p = averaging_projection(&n).unwrap().entries;
        assert!(max_abs_diff(&(&p * &p), &p) < 1e-15);
        // block averaging over the two cosets
        let q = quotient(&n).unwrap();
        for s in 0..6 {
            for t in 0..6 {
                let expected = if q.projection[s] == q.projection[t] {
                    1.0 / 3.0
                } else {
                    0.0
                };
                assert!((p[(s, t)] - c(expected, 0.0)).norm() < 1e-16);
            }
        }
        let t = subgroup(&g, &[0, 2]).unwrap();
        assert_eq!(averaging_projection(&t).unwrap_err(), LabError::NotNormal);
    }

    #[test]
    fn quotient_compression_examples() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_element(g.clone(), &mut rng);
        let trivial = subgroup(&g, &[0]).unwrap();
        assert_eq!(
            quotient_compression(&trivial, &f).unwrap().0.entries,
            regular_matrix(&f).entries
        );
        let whole = subgroup(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        let (m, _) = quotient_compression(&whole, &f).unwrap();
        let total: C64 = f.coeffs().iter().sum();
        assert_eq!(m.dim(), 1);
        assert!((m.entries[(0, 0)] - total).norm() < 1e-15);
        let n = a3(&g);
        for _ in 0..20 {
            let f = random_element(g.clone(), &mut rng);
            assert!(commuting_square_residual(&n, &f).unwrap() < 1e-14);
            let fi = random_integer_element(g.clone(), &mut rng);
            assert!(commuting_square_residual(&trivial, &fi).unwrap() == 0.0);
        }
    }

    #[test]
    fn coset_blocks() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let whole = subgroup(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        let f = random_element(g.clone(), &mut rng);
        let r = coset_block_structure(&whole, &f).unwrap();
        assert_eq!(r.block_count, 1);
        assert!(r.exact);

        let h = a3(&g);
        for _ in 0..10 {
            let local = random_element(h.group().clone(), &mut rng);
            let r = coset_block_structure(&h, &embed_subgroup(&h, &local).unwrap()).unwrap();
            assert_eq!((r.block_count, r.block_size), (2, 3));
            assert!(r.exact);
        }

        let z4 = arc(make_cyclic(4).unwrap());
        let e = subgroup(&z4, &[0]).unwrap();
        let f = GroupAlgebraElement::delta(z4.clone(), 0).scale(c(2.0, -3.0));
        let r = coset_block_structure(&e, &f).unwrap();
        assert_eq!(r.block_count, 4);
        assert!(r.exact);

        let off = random_element(g.clone(), &mut rng);
        assert!(coset_block_structure(&h, &off).is_err());
    }

    #[test]
    fn crossed_units_on_z3() {
        let g = make_cyclic(3).unwrap();
        let units: Vec<Vec<OperatorMatrix>> = (0..3)
            .map(|x| (0..3).map(|y| crossed_matrix_unit(&g, x, y).unwrap()).collect())
            .collect();
        let zero = CMatrix::zeros(9, 9);
        for x in 0..3 {
            let d = &units[x][x].entries;
            assert_eq!(d * d, *d);
            for r in 0..9 {
                for col in 0..9 {
                    if r != col {
                        assert_eq!(d[(r, col)], c(0.0, 0.0));
                    }
                }
            }
            for y in 0..3 {
                for z in 0..3 {
                    for w in 0..3 {
                        let prod = &units[x][y].entries * &units[z][w].entries;
                        if z == y {
                            assert_eq!(prod, units[x][w].entries);
                        } else {
                            assert_eq!(prod, zero);
                        }
                    }
                }
            }
        }
        let sum = (0..3).fold(CMatrix::zeros(9, 9), |acc, x| acc + &units[x][x].entries);
        assert_eq!(sum, CMatrix::identity(9, 9));
    }

    #[test]
    fn crossed_operator_examples() {
        let g = make_symmetric(3).unwrap();
        assert_eq!(
            crossed_operator(&g, &CMatrix::identity(6, 6)).unwrap().entries,
            CMatrix::identity(36, 36)
        );
        let mut e = CMatrix::zeros(6, 6);
        e[(2, 4)] = c(1.0, 0.0);
        assert_eq!(
            crossed_operator(&g, &e).unwrap(),
            crossed_matrix_unit(&g, 2, 4).unwrap()
        );
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        use rand::Rng;
        for _ in 0..5 {
            let c1 = CMatrix::from_fn(6, 6, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let c2 = CMatrix::from_fn(6, 6, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let lhs = crossed_operator(&g, &(&c1 * &c2)).unwrap();
            let rhs = crossed_operator(&g, &c1)
                .unwrap()
                .mul(&crossed_operator(&g, &c2).unwrap());
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
        assert!(crossed_operator(&g, &CMatrix::identity(5, 5)).is_err());
        assert!(crossed_matrix_unit(&make_cyclic(25).unwrap(), 0, 0).is_err());
    }
}
