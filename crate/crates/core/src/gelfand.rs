//! Characters and Fourier transform of groups built as products of cyclic
//! groups.
//!
//! Character `j` corresponds to the mixed-radix tuple `(j₁..j_k)` of `j`,
//! and `χ_j(g) = ∏ exp(2πi·jᵢgᵢ/nᵢ)`. The character order fixes the
//! identification of the maximal ideal space with the dual group.

use std::sync::Arc;

use crate::algebra::GroupAlgebraElement;
use crate::analysis::{regular_pnorm, CheckDetail, CheckReport};
use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::operators::regular_matrix;
use crate::pnorm::EstimatorConfig;
use crate::{CMatrix, C64};

/// Tolerance for the `p = 2` equality `N_2(f) = max|f̂|`.
pub const SPECTRAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    /// Row `j` is `χ_j` over element ids.
    matrix: CMatrix,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, character: usize, s: usize) -> C64 {
        self.matrix[(character, s)]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Largest `|χ(gh) − χ(g)χ(h)|` over all characters and pairs.
    pub fn multiplicativity_defect(&self) -> f64 {
        let g = &self.group;
        let mut worst = 0.0f64;
        for j in 0..self.len() {
            for s in g.elements() {
                for t in g.elements() {
                    let d = self.value(j, g.mul(s, t)) - self.value(j, s) * self.value(j, t);
                    worst = worst.max(d.norm());
                }
            }
        }
        worst
    }

    /// Largest entry of `X·Xᴴ − |G|·I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.len();
        let gram = &self.matrix * self.matrix.adjoint();
        let target = CMatrix::identity(n, n) * C64::new(n as f64, 0.0);
        crate::operators::max_abs_diff(&gram, &target)
    }
}

/// The full character table; needs the cyclic-product structure recorded
/// by the constructors.
pub fn characters(group: &Arc<FiniteGroup>) -> Result<CharacterTable> {
    let structure = group.abelian_structure().ok_or(LabError::NoAbelianStructure)?.to_vec();
    let n = group.order();
    let coords: Vec<Vec<usize>> = group
        .elements()
        .map(|s| group.cyclic_coordinates(s).expect("structure present"))
        .collect();
    let matrix = CMatrix::from_fn(n, n, |j, s| {
        // exact rational phase, reduced before the exponential
        let frac: f64 = coords[j]
            .iter()
            .zip(&coords[s])
            .zip(&structure)
            .map(|((&a, &b), &m)| ((a * b) % m) as f64 / m as f64)
            .sum();
        C64::from_polar(1.0, std::f64::consts::TAU * frac.fract())
    });
    Ok(CharacterTable {
        group: Arc::clone(group),
        matrix,
    })
}

/// `f̂(χ) = Σ_g f(g)·χ(g)` in character order.
pub fn fourier(table: &CharacterTable, f: &GroupAlgebraElement) -> Result<Vec<C64>> {
    if **table.group() != **f.group() {
        return Err(LabError::GroupMismatch("character table of another group".into()));
    }
    Ok((0..table.len())
        .map(|j| f.group().elements().map(|s| f.coeff(s) * table.value(j, s)).sum())
        .collect())
}

/// Largest off-diagonal entry of `U·λ(f)·Uᴴ` with `U = X/√|G|`, and the
/// largest deviation of its diagonal from `f̂`.
pub fn diagonalization_residual(table: &CharacterTable, f: &GroupAlgebraElement) -> Result<(f64, f64)> {
    let hat = fourier(table, f)?;
    let n = table.len();
    let scale = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let u = table.matrix().map(|z| z * scale);
    let d = &u * &regular_matrix(f).entries * u.adjoint();
    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                diag = diag.max((d[(i, i)] - hat[i]).norm());
            } else {
                off = off.max(d[(i, j)].norm());
            }
        }
    }
    Ok((off, diag))
}

/// Relative gap in `Σ|f̂|² = |G|·Σ|f|²`.
pub fn plancherel_residual(table: &CharacterTable, f: &GroupAlgebraElement) -> Result<f64> {
    let hat = fourier(table, f)?;
    let lhs: f64 = hat.iter().map(|z| z.norm_sqr()).sum();
    let rhs: f64 = table.len() as f64 * f.coeffs().iter().map(|z| z.norm_sqr()).sum::<f64>();
    Ok((lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE))
}

/// `max|f̂| ≤ N_p(f) ≤ ‖f‖₁`, equality `N_2(f) = max|f̂|`, and invertibility
/// of the character matrix (so `f̂ = 0` forces `f = 0`).
pub fn check_gelfand_sandwich(f: &GroupAlgebraElement, p: f64, cfg: &EstimatorConfig, tol: f64) -> Result<CheckReport> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(LabError::InvalidExponent(p));
    }
    let group = f.group();
    if group.abelian_structure().is_none() {
        return Err(if group.is_commutative() {
            LabError::NoAbelianStructure
        } else {
            LabError::NotAbelian
        });
    }
    let table = characters(group)?;
    let hat = fourier(&table, f)?;
    let max_fourier = hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let norm_p = regular_pnorm(f, p, cfg)?.lower;
    let norm_2 = regular_pnorm(f, 2.0, cfg)?.lower;
    let l1 = f.l1_norm();

    let scale = |x: f64| x.abs().max(f64::MIN_POSITIVE);
    let low = (max_fourier - norm_p) / scale(norm_p);
    let high = (norm_p - l1) / scale(l1);
    let spectral_gap = (norm_2 - max_fourier).abs() / max_fourier.max(norm_2).max(1.0);
    let spectral = if spectral_gap <= SPECTRAL_TOL {
        0.0
    } else {
        1.0 + spectral_gap
    };
    // X·Xᴴ = |G|·I certifies that X is invertible
    let orth = table.orthogonality_defect();
    let injective = if orth <= 1e-9 { 0.0 } else { 1.0 + orth };

    let detail = CheckDetail::new()
        .input("group", group.name())
        .input("p", p)
        .measure("max_fourier", max_fourier)
        .measure("norm_p", norm_p)
        .measure("norm_2", norm_2)
        .measure("l1", l1)
        .measure("orthogonality_defect", orth);
    Ok(CheckReport::new(
        "gelfand-sandwich",
        tol,
        low.max(high).max(spectral).max(injective),
        vec![detail],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_element;
    use crate::group::{direct_product, make_cyclic, make_symmetric, quotient};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(make_cyclic(n).unwrap())
    }

    #[test]
    fn small_tables() {
        let t = characters(&z(1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.value(0, 0), C64::new(1.0, 0.0));

        let t = characters(&z(2)).unwrap();
        assert!((t.value(1, 1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((t.value(0, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);

        let v4 = Arc::new(direct_product(&make_cyclic(2).unwrap(), &make_cyclic(2).unwrap()).unwrap());
        let t = characters(&v4).unwrap();
        assert_eq!(t.len(), 4);
        for j in 0..4 {
            for s in 0..4 {
                let x = t.value(j, s);
                assert!(x.im.abs() < 1e-15 && (x.re.abs() - 1.0).abs() < 1e-15);
            }
        }
        assert!(t.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn table_invariants() {
        for spec in ["Z6", "Z2xZ4", "Z3xZ3", "Z12"] {
            let g = Arc::new(crate::group::parse_group_spec(spec).unwrap());
            let t = characters(&g).unwrap();
            assert!(t.multiplicativity_defect() < 1e-12, "{spec}");
            assert!(t.orthogonality_defect() < 1e-9, "{spec}");
            for j in 0..t.len() {
                for s in g.elements() {
                    assert!((t.value(j, s).norm() - 1.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn structure_is_required() {
        let s3 = Arc::new(make_symmetric(3).unwrap());
        assert_eq!(characters(&s3).unwrap_err(), LabError::NoAbelianStructure);
        // S3/A3 is abelian but carries no cyclic-product structure
        let a3 = crate::group::generated_subgroup(&s3, &[3]).unwrap();
        let q = quotient(&a3).unwrap();
        assert!(q.group.is_commutative());
        assert!(characters(&q.group).is_err());
    }

    #[test]
    fn fourier_examples() {
        let g = z(4);
        let t = characters(&g).unwrap();
        let hat = fourier(&t, &GroupAlgebraElement::delta(g.clone(), 0)).unwrap();
        assert!(hat.iter().all(|x| (x - C64::new(1.0, 0.0)).norm() < 1e-15));

        let z2 = z(2);
        let f = GroupAlgebraElement::from_real(z2.clone(), &[1.0, 1.0]).unwrap();
        let hat = fourier(&characters(&z2).unwrap(), &f).unwrap();
        assert!((hat[0] - C64::new(2.0, 0.0)).norm() < 1e-15 && hat[1].norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let a = random_element(g.clone(), &mut rng);
            let b = random_element(g.clone(), &mut rng);
            let lhs = fourier(&t, &a.convolve(&b).unwrap()).unwrap();
            let fa = fourier(&t, &a).unwrap();
            let fb = fourier(&t, &b).unwrap();
            for i in 0..4 {
                assert!((lhs[i] - fa[i] * fb[i]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn diagonalization_and_plancherel() {
        let g = Arc::new(crate::group::parse_group_spec("Z2xZ4").unwrap());
        let t = characters(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let f = random_element(g.clone(), &mut rng);
            let (off, diag) = diagonalization_residual(&t, &f).unwrap();
            assert!(off < 1e-9 && diag < 1e-9);
            assert!(plancherel_residual(&t, &f).unwrap() < 1e-9);
        }
    }

    #[test]
    fn sandwich_examples() {
        let cfg = EstimatorConfig::default();
        let g = z(6);
        let r = check_gelfand_sandwich(&GroupAlgebraElement::delta(g.clone(), 2), 3.0, &cfg, 1e-6).unwrap();
        assert!(r.pass);
        let m = &r.details[0].measured;
        assert!((m["max_fourier"] - 1.0).abs() < 1e-12 && (m["norm_p"] - 1.0).abs() < 1e-12);

        let z2 = z(2);
        let f = GroupAlgebraElement::from_real(z2, &[1.0, 1.0]).unwrap();
        for p in [1.0, 1.5, 3.0] {
            let r = check_gelfand_sandwich(&f, p, &cfg, 1e-6).unwrap();
            assert!(r.pass);
            assert!((r.details[0].measured["norm_p"] - 2.0).abs() < 1e-10);
        }

        let f = random_element(g, &mut ChaCha8Rng::seed_from_u64(2));
        let r = check_gelfand_sandwich(&f, 1.5, &cfg, 1e-6).unwrap();
        assert!(r.pass);
        let m = &r.details[0].measured;
        assert!(m["max_fourier"] < m["norm_p"] && m["norm_p"] < m["l1"]);

        let s3 = Arc::new(make_symmetric(3).unwrap());
        let f = random_element(s3, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(
            check_gelfand_sandwich(&f, 1.5, &cfg, 1e-6).unwrap_err(),
            LabError::NotAbelian
        );
    }
}
