use std::sync::Arc;

use lplab::algebra::{push_quotient, random_integer_element, GroupAlgebraElement};
use lplab::group::{parse_group_spec, quotient, subgroup, FiniteGroup};
use lplab::io::{element_from_csv, element_from_json, element_to_csv, element_to_json};
use lplab::operators::{commuting_square_residual, regular_matrix};
use lplab::pnorm::{
    conjugate_exponent, dual_vector, estimate_pnorm, exact_norm, interpolation_upper, ratio, vec_pnorm, EstimatorConfig,
};
use lplab::{CMatrix, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SPECS: [&str; 7] = ["Z1", "Z6", "S3", "D4", "Q8", "Z2xZ4", "S3xZ2"];

fn group_strategy() -> impl Strategy<Value = Arc<FiniteGroup>> {
    prop::sample::select(SPECS.to_vec()).prop_map(|s| Arc::new(parse_group_spec(s).unwrap()))
}

fn integer_elements(n: usize) -> impl Strategy<Value = (Arc<FiniteGroup>, Vec<GroupAlgebraElement>)> {
    (group_strategy(), any::<u64>()).prop_map(move |(g, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = (0..n)
            .map(|_| random_integer_element(Arc::clone(&g), &mut rng))
            .collect();
        (g, fs)
    })
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn square(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim)
        .prop_flat_map(|n| prop::collection::vec(complex(), n * n).prop_map(move |v| CMatrix::from_vec(n, n, v)))
}

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.1, 1.3, 1.5, 1.8, 2.5, 3.0, 4.0, 6.0])
}

proptest! {
    #[test]
    fn group_axioms_hold((g, _) in integer_elements(0)) {
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.elements() {
                for c in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn convolution_is_associative_and_bilinear((_, fs) in integer_elements(3)) {
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        let left = f.convolve(g).unwrap().convolve(h).unwrap();
        let right = f.convolve(&g.convolve(h).unwrap()).unwrap();
        prop_assert_eq!(left.coeffs(), right.coeffs());
        let split = f.convolve(&g.add(h).unwrap()).unwrap();
        let sum = f.convolve(g).unwrap().add(&f.convolve(h).unwrap()).unwrap();
        prop_assert_eq!(split.coeffs(), sum.coeffs());
    }

    #[test]
    fn sharp_reverses_products((_, fs) in integer_elements(2)) {
        let (f, g) = (&fs[0], &fs[1]);
        let lhs = f.convolve(g).unwrap().sharp();
        let rhs = g.sharp().convolve(&f.sharp()).unwrap();
        prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
        let twice = f.sharp().sharp();
        prop_assert_eq!(twice.coeffs(), f.coeffs());
    }

    #[test]
    fn regular_representation_is_multiplicative((_, fs) in integer_elements(2)) {
        let (f, g) = (&fs[0], &fs[1]);
        let prod = regular_matrix(&f.convolve(g).unwrap()).entries;
        let composed = &regular_matrix(f).entries * &regular_matrix(g).entries;
        prop_assert_eq!(prod, composed);
        prop_assert_eq!(regular_matrix(&f.sharp()).entries, regular_matrix(f).entries.transpose());
    }

    #[test]
    fn one_and_infinity_norms_are_l1((_, fs) in integer_elements(1)) {
        let m = regular_matrix(&fs[0]).entries;
        let l1 = fs[0].l1_norm();
        prop_assert!((exact_norm(&m, 1.0).unwrap() - l1).abs() <= 1e-12 * l1.max(1.0));
        prop_assert!((exact_norm(&m, f64::INFINITY).unwrap() - l1).abs() <= 1e-12 * l1.max(1.0));
    }

    #[test]
    fn quotient_square_commutes_and_contracts_l1((g, fs) in integer_elements(1)) {
        let n = subgroup(&g, &g.center()).unwrap();
        prop_assert!(commuting_square_residual(&n, &fs[0]).unwrap() <= 1e-12 * fs[0].l1_norm().max(1.0));
        let q = quotient(&n).unwrap();
        let pushed = push_quotient(&n, &q, &fs[0]).unwrap();
        prop_assert!(pushed.l1_norm() <= fs[0].l1_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn dual_vector_norms(v in prop::collection::vec(complex(), 1..8), p in exponent()) {
        prop_assume!(v.iter().any(|z| z.norm() > 1e-6));
        let w = dual_vector(&v, p).unwrap();
        let q = conjugate_exponent(p);
        prop_assert!((vec_pnorm(&w, q).unwrap() - 1.0).abs() < 1e-12);
        let pairing: f64 = v.iter().zip(&w).map(|(a, b)| (a * b).re).sum();
        prop_assert!((pairing - vec_pnorm(&v, p).unwrap()).abs() < 1e-12 * pairing.max(1.0));
    }

    #[test]
    fn element_files_round_trip((_, fs) in integer_elements(1), scale in 1e-3..1e3f64) {
        let f = fs[0].scale(C64::new(scale / 7.0, 0.0));
        let back = element_from_json(&element_to_json(&f).unwrap()).unwrap();
        prop_assert_eq!(back.coeffs(), f.coeffs());
        let back = element_from_csv(Arc::clone(f.group()), element_to_csv(&f).as_bytes()).unwrap();
        prop_assert_eq!(back.coeffs(), f.coeffs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimator_is_sandwiched(a in square(5), p in exponent()) {
        let est = estimate_pnorm(&a, p, &EstimatorConfig::default()).unwrap();
        let rt = interpolation_upper(&a).at(p);
        prop_assert!(est.lower <= rt + 1e-9);
        prop_assert!(est.lower <= est.upper + 1e-9);
        // the witness certifies the lower bound
        prop_assert!((ratio(&a, &est.witness, p) - est.lower).abs() <= 1e-12 * est.lower.max(1.0));
        // every unit vector is a lower bound, the all-ones one included
        let ones = vec![C64::new(1.0, 0.0); a.ncols()];
        prop_assert!(ratio(&a, &ones, p) <= est.lower + 1e-12);
    }

    #[test]
    fn estimator_permutation_and_transpose_invariance(a in square(3), p in exponent(), shift in 0usize..3) {
        let n = a.nrows();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = CMatrix::from_fn(n, n, |i, j| a[(perm[i], perm[j])]);
        let cfg = EstimatorConfig::default();
        let base = estimate_pnorm(&a, p, &cfg).unwrap().lower;
        prop_assume!(base > 1e-6);
        let moved = estimate_pnorm(&permuted, p, &cfg).unwrap().lower;
        prop_assert!((base - moved).abs() <= 1e-6 * base, "{base} vs {moved}");
        let dual = estimate_pnorm(&a.transpose(), conjugate_exponent(p), &cfg).unwrap().lower;
        prop_assert!((base - dual).abs() <= 1e-6 * base, "{base} vs {dual}");
    }

    #[test]
    fn regular_norms_lie_between_spectral_and_l1((g, fs) in integer_elements(1), p in exponent()) {
        let m = regular_matrix(&fs[0]).entries;
        let l1 = fs[0].l1_norm();
        let two = exact_norm(&m, 2.0).unwrap();
        let est = estimate_pnorm(&m, p, &EstimatorConfig::default()).unwrap().lower;
        prop_assert!(est <= l1 * (1.0 + 1e-12));
        prop_assert!(two <= est * (1.0 + 1e-9), "{} {two} {est}", g.name());
    }
}
