//! The multi-start estimator against the grid oracle and the interpolation
//! bound, on a handful of random 2x2 and 3x3 complex matrices.

use lplab::pnorm::{bruteforce_pnorm, estimate_pnorm, interpolation_upper, EstimatorConfig};
use lplab::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lplab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = EstimatorConfig::default();
    println!(
        "{:>3} {:>4} {:>16} {:>16} {:>10} {:>12}",
        "dim", "p", "estimate", "oracle", "rel gap", "RT bound"
    );
    for k in 0..6 {
        let dim = 2 + k % 2;
        let a = CMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let rt = interpolation_upper(&a);
        for p in [1.5, 4.0] {
            let est = estimate_pnorm(&a, p, &cfg)?;
            let brute = bruteforce_pnorm(&a, p, if dim == 2 { 64 } else { 24 })?;
            println!(
                "{dim:>3} {p:>4} {:>16.12} {brute:>16.12} {:>10.2e} {:>12.8}",
                est.lower,
                (est.lower - brute).abs() / brute,
                rt.at(p)
            );
        }
    }
    Ok(())
}
