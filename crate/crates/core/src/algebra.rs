//! Complex group-algebra elements `f: G -> C` under counting-measure
//! convolution.

use std::sync::Arc;

use rand::Rng;

use crate::error::{LabError, Result};
use crate::group::{opposite, FiniteGroup, SubgroupHandle};
use crate::C64;

#[derive(Clone, Debug)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<C64>,
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupAlgebraElement {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(LabError::GroupMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(LabError::NonFinite(format!("coefficient {i}")));
        }
        Ok(Self { group, coeffs })
    }

    pub fn from_real(group: Arc<FiniteGroup>, coeffs: &[f64]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self {
            group,
            coeffs: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// Point mass `δ_s`.
    pub fn delta(group: Arc<FiniteGroup>, s: usize) -> Self {
        let mut f = Self::zero(group);
        f.coeffs[s] = C64::new(1.0, 0.0);
        f
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> C64 {
        self.coeffs[s]
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            group: Arc::clone(&self.group),
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            group: Arc::clone(&self.group),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(LabError::GroupMismatch(format!(
                "{} vs {}",
                self.group.name(),
                other.group.name()
            )))
        }
    }

    /// `(f∗g)(s) = Σ_t f(t)·g(t⁻¹s)`, evaluated in that order.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let g = &self.group;
        let coeffs = g
            .elements()
            .map(|s| {
                g.elements()
                    .map(|t| self.coeffs[t] * other.coeffs[g.mul(g.inv(t), s)])
                    .sum()
            })
            .collect();
        Ok(Self {
            group: Arc::clone(g),
            coeffs,
        })
    }

    /// `f♯(s) = f(s⁻¹)`; the modular function is 1 on a discrete group.
    pub fn sharp(&self) -> Self {
        let g = &self.group;
        Self {
            group: Arc::clone(g),
            coeffs: g.elements().map(|s| self.coeffs[g.inv(s)]).collect(),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The same coefficients viewed over the opposite group, where
    /// `f ∗op g = g ∗ f`.
    pub fn transport_op(&self) -> Self {
        Self {
            group: Arc::new(opposite(&self.group)),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Reinterprets the coefficients over another group of the same order.
    pub fn with_group(&self, group: Arc<FiniteGroup>) -> Result<Self> {
        Self::new(group, self.coeffs.clone())
    }

    /// Restriction to a subgroup; fails unless `f` vanishes off `h`.
    pub fn restrict(&self, h: &SubgroupHandle) -> Result<Self> {
        if !same_group(&self.group, h.parent()) {
            return Err(LabError::GroupMismatch("subgroup of a different group".into()));
        }
        if let Some(s) = self
            .group
            .elements()
            .find(|&s| !h.contains(s) && self.coeffs[s] != C64::new(0.0, 0.0))
        {
            return Err(LabError::SupportViolation(self.group.label(s).to_string()));
        }
        Ok(Self {
            group: Arc::clone(h.group()),
            coeffs: h.member_ids().iter().map(|&s| self.coeffs[s]).collect(),
        })
    }
}

/// Zero extension `ι: ℓ¹(H) → ℓ¹(G)`.
pub fn embed_subgroup(h: &SubgroupHandle, f: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    if !same_group(f.group(), h.group()) {
        return Err(LabError::GroupMismatch(
            "element is not defined on this subgroup".into(),
        ));
    }
    let mut out = GroupAlgebraElement::zero(Arc::clone(h.parent()));
    for (i, &s) in h.member_ids().iter().enumerate() {
        out.coeffs[s] = f.coeffs[i];
    }
    Ok(out)
}

/// `T_N f (sN) = Σ_{n∈N} f(sn)` over the quotient group.
pub fn push_quotient(
    n: &SubgroupHandle,
    quotient: &crate::group::Quotient,
    f: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    if !n.is_normal() {
        return Err(LabError::NotNormal);
    }
    if !same_group(f.group(), n.parent()) {
        return Err(LabError::GroupMismatch(
            "element is not defined on the parent group".into(),
        ));
    }
    let mut out = GroupAlgebraElement::zero(Arc::clone(&quotient.group));
    for s in f.group().elements() {
        out.coeffs[quotient.projection[s]] += f.coeffs[s];
    }
    Ok(out)
}

/// Coefficients with real and imaginary parts uniform in `[-1, 1]`,
/// normalized to `‖f‖₁ = 1`.
pub fn random_element<R: Rng + ?Sized>(group: Arc<FiniteGroup>, rng: &mut R) -> GroupAlgebraElement {
    let n = group.order();
    let coeffs: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    let norm: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let coeffs = coeffs.into_iter().map(|c| c / norm).collect();
    GroupAlgebraElement { group, coeffs }
}

/// `random_element` driven by stream `index` of a ChaCha8 generator seeded
/// with `seed`; the same `(seed, index)` always gives the same element.
pub fn seeded_element(group: Arc<FiniteGroup>, seed: u64, index: u64) -> GroupAlgebraElement {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    random_element(group, &mut rng)
}

/// Small-integer Gaussian coefficients, for which convolution is exact in
/// floating point.
pub fn random_integer_element<R: Rng + ?Sized>(group: Arc<FiniteGroup>, rng: &mut R) -> GroupAlgebraElement {
    let n = group.order();
    let coeffs = (0..n)
        .map(|_| C64::new(rng.gen_range(-9..=9) as f64, rng.gen_range(-9..=9) as f64))
        .collect();
    GroupAlgebraElement { group, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generated_subgroup, make_cyclic, make_symmetric, parse_group_spec, quotient, subgroup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(make_symmetric(3).unwrap())
    }

    fn a3(g: &Arc<FiniteGroup>) -> SubgroupHandle {
        let cyc = g.labels().iter().position(|l| l == "231").unwrap();
        generated_subgroup(g, &[cyc]).unwrap()
    }

    #[test]
    fn point_masses_convolve_to_products() {
        let g = s3();
        for s in g.elements() {
            for t in g.elements() {
                let lhs = GroupAlgebraElement::delta(g.clone(), s)
                    .convolve(&GroupAlgebraElement::delta(g.clone(), t))
                    .unwrap();
                assert_eq!(
                    lhs.coeffs(),
                    GroupAlgebraElement::delta(g.clone(), g.mul(s, t)).coeffs()
                );
            }
        }
    }

    #[test]
    fn identity_and_z2_example() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_element(g.clone(), &mut rng);
        let e = GroupAlgebraElement::delta(g.clone(), 0);
        assert_eq!(e.convolve(&f).unwrap().coeffs(), f.coeffs());
        assert_eq!(f.convolve(&e).unwrap().coeffs(), f.coeffs());

        let z2 = Arc::new(make_cyclic(2).unwrap());
        let a = GroupAlgebraElement::from_real(z2.clone(), &[1.0, 1.0]).unwrap();
        let b = GroupAlgebraElement::from_real(z2, &[1.0, -1.0]).unwrap();
        assert_eq!(a.convolve(&b).unwrap().coeffs(), &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(b.l1_norm(), 2.0);
    }

    #[test]
    fn group_mismatch_is_rejected() {
        let f = GroupAlgebraElement::delta(s3(), 1);
        let g = GroupAlgebraElement::delta(Arc::new(make_cyclic(6).unwrap()), 1);
        assert!(matches!(f.convolve(&g), Err(LabError::GroupMismatch(_))));
        assert!(GroupAlgebraElement::new(s3(), vec![c(0.0, 0.0); 5]).is_err());
        assert!(GroupAlgebraElement::new(s3(), vec![c(f64::NAN, 0.0); 6]).is_err());
    }

    #[test]
    fn sharp_is_an_isometric_anti_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["S3", "D4", "Q8", "Z6"] {
            let g = Arc::new(parse_group_spec(spec).unwrap());
            for s in g.elements() {
                let d = GroupAlgebraElement::delta(g.clone(), s);
                assert_eq!(
                    d.sharp().coeffs(),
                    GroupAlgebraElement::delta(g.clone(), g.inv(s)).coeffs()
                );
            }
            for _ in 0..20 {
                let f = random_integer_element(g.clone(), &mut rng);
                let h = random_integer_element(g.clone(), &mut rng);
                assert_eq!(f.sharp().sharp().coeffs(), f.coeffs());
                let lhs = f.convolve(&h).unwrap().sharp();
                let rhs = h.sharp().convolve(&f.sharp()).unwrap();
                assert_eq!(lhs.coeffs(), rhs.coeffs());
                assert!((f.sharp().l1_norm() - f.l1_norm()).abs() <= 1e-13 * f.l1_norm());
            }
        }
    }

    #[test]
    fn young_inequality_sanity() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let f = random_element(g.clone(), &mut rng);
            let h = random_element(g.clone(), &mut rng).scale(c(2.5, -1.0));
            let fh = f.convolve(&h).unwrap();
            assert!(fh.l1_norm() <= f.l1_norm() * h.l1_norm() + 1e-12);
        }
    }

    #[test]
    fn subgroup_embedding_is_isometric_homomorphism() {
        let g = s3();
        let h = a3(&g);
        let eh = GroupAlgebraElement::delta(h.group().clone(), 0);
        assert_eq!(
            embed_subgroup(&h, &eh).unwrap().coeffs(),
            GroupAlgebraElement::delta(g.clone(), 0).coeffs()
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = random_element(h.group().clone(), &mut rng);
            assert!((embed_subgroup(&h, &f).unwrap().l1_norm() - f.l1_norm()).abs() < 1e-15);
            let a = random_integer_element(h.group().clone(), &mut rng);
            let b = random_integer_element(h.group().clone(), &mut rng);
            let lhs = embed_subgroup(&h, &a.convolve(&b).unwrap()).unwrap();
            let rhs = embed_subgroup(&h, &a)
                .unwrap()
                .convolve(&embed_subgroup(&h, &b).unwrap())
                .unwrap();
            assert_eq!(lhs.coeffs(), rhs.coeffs());
            let back = embed_subgroup(&h, &a).unwrap().restrict(&h).unwrap();
            assert_eq!(back.coeffs(), a.coeffs());
        }
        assert!(embed_subgroup(&h, &GroupAlgebraElement::delta(g.clone(), 0)).is_err());
        let odd = GroupAlgebraElement::delta(g.clone(), 1);
        assert!(matches!(odd.restrict(&h), Err(LabError::SupportViolation(_))));
    }

    #[test]
    fn quotient_pushforward() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_element(g.clone(), &mut rng);

        let trivial = subgroup(&g, &[0]).unwrap();
        let q = quotient(&trivial).unwrap();
        assert_eq!(push_quotient(&trivial, &q, &f).unwrap().coeffs(), f.coeffs());

        let whole = subgroup(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        let q = quotient(&whole).unwrap();
        let total: C64 = f.coeffs().iter().sum();
        assert!((push_quotient(&whole, &q, &f).unwrap().coeff(0) - total).norm() < 1e-15);

        let n = a3(&g);
        let q = quotient(&n).unwrap();
        for _ in 0..30 {
            let a = random_integer_element(g.clone(), &mut rng);
            let b = random_integer_element(g.clone(), &mut rng);
            let lhs = push_quotient(&n, &q, &a.convolve(&b).unwrap()).unwrap();
            let rhs = push_quotient(&n, &q, &a)
                .unwrap()
                .convolve(&push_quotient(&n, &q, &b).unwrap())
                .unwrap();
            assert_eq!(lhs.coeffs(), rhs.coeffs());
            assert!(push_quotient(&n, &q, &a).unwrap().l1_norm() <= a.l1_norm());
        }
        // nonnegative f: equality in the contraction
        let pos = GroupAlgebraElement::from_real(g.clone(), &[1.0, 2.0, 0.5, 0.0, 3.0, 1.5]).unwrap();
        assert_eq!(push_quotient(&n, &q, &pos).unwrap().l1_norm(), pos.l1_norm());

        let t = subgroup(&g, &[0, 2]).unwrap();
        assert!(!t.is_normal());
        assert_eq!(push_quotient(&t, &q, &f).unwrap_err(), LabError::NotNormal);
    }

    #[test]
    fn opposite_transport_reverses_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = s3();
        let op = Arc::new(opposite(&g));
        for _ in 0..50 {
            let f = random_integer_element(g.clone(), &mut rng);
            let h = random_integer_element(g.clone(), &mut rng);
            let fo = f.with_group(op.clone()).unwrap();
            let ho = h.with_group(op.clone()).unwrap();
            assert_eq!(fo.convolve(&ho).unwrap().coeffs(), h.convolve(&f).unwrap().coeffs());
            assert_eq!(f.transport_op().l1_norm(), f.l1_norm());
        }
        let z = Arc::new(make_cyclic(5).unwrap());
        let f = random_integer_element(z.clone(), &mut rng);
        let h = random_integer_element(z, &mut rng);
        let via_op = f.transport_op().convolve(&h.transport_op()).unwrap();
        assert_eq!(via_op.coeffs(), f.convolve(&h).unwrap().coeffs());
    }

    #[test]
    fn random_element_is_normalized_and_seeded() {
        let g = s3();
        let a = random_element(g.clone(), &mut ChaCha8Rng::seed_from_u64(0));
        let b = random_element(g.clone(), &mut ChaCha8Rng::seed_from_u64(0));
        let c = random_element(g, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a.coeffs(), b.coeffs());
        assert_ne!(a.coeffs(), c.coeffs());
        assert!((a.l1_norm() - 1.0).abs() < 1e-12);
    }
}
