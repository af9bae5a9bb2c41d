//! The crossed product of `C(G)` by translation, represented on `ℓ^p(G×G)`:
//! the units `a_{x,y}` multiply like matrix units, and `Σ C[x][y]·a_{x,y}`
//! has the same `p`-norm as the `|G|×|G|` matrix `C`.

use std::sync::Arc;

use lplab::crossed::{check_mnp_isometry, verify_matrix_units, verify_spatiality, CrossedCoefficients};
use lplab::group::parse_group_spec;
use lplab::operators::crossed_matrix_unit;
use lplab::pnorm::EstimatorConfig;
use lplab::{CMatrix, C64};

fn main() -> lplab::Result<()> {
    let cfg = EstimatorConfig::default();
    let z3 = Arc::new(parse_group_spec("Z3")?);
    let unit = crossed_matrix_unit(&z3, 1, 2)?;
    println!("a_(1,2) on Z3 is a {}x{} partial permutation:", unit.dim(), unit.dim());
    for r in 0..unit.dim() {
        let row: String = (0..unit.dim())
            .map(|c| if unit.entries[(r, c)].re == 1.0 { '1' } else { '.' })
            .collect();
        println!("    {row}");
    }

    for spec in ["Z3", "S3"] {
        let g = Arc::new(parse_group_spec(spec)?);
        let units = verify_matrix_units(&g)?;
        let spatial = verify_spatiality(&g, &cfg)?;
        println!(
            "{spec}: matrix units {} over {} quadruples, spatial {}",
            units.pass, units.details[0].measured["quadruples"], spatial.pass
        );
        let n = g.order();
        let c = CMatrix::from_fn(n, n, |i, j| C64::new((i as f64 - j as f64).cos(), (i * j) as f64 / 5.0));
        let coeffs = CrossedCoefficients::new(Arc::clone(&g), c)?;
        for p in [1.5, 3.0] {
            let r = check_mnp_isometry(&coeffs, p, &cfg, 1e-6)?;
            println!(
                "  p = {p}: ‖ρ(C)‖ = {:.12}  ‖C‖ = {:.12}",
                r.details[0].measured["norm_represented"], r.details[0].measured["norm_matrix"]
            );
        }
    }
    Ok(())
}
