//! Elements supported on a subgroup keep their norm in the big group, and
//! pushing an element to a quotient never increases its norm.

use std::sync::Arc;

use lplab::algebra::{embed_subgroup, push_quotient, seeded_element};
use lplab::analysis::{check_quotient_contraction, check_subgroup_isometry, regular_pnorm, DEFAULT_TOL};
use lplab::group::{generated_subgroup, parse_group_spec, quotient, subgroup};
use lplab::operators::{coset_block_structure, regular_matrix};
use lplab::pnorm::EstimatorConfig;

fn main() -> lplab::Result<()> {
    let cfg = EstimatorConfig::default();
    let d4 = Arc::new(parse_group_spec("D4")?);

    let rotations = generated_subgroup(&d4, &[1])?;
    let local = seeded_element(Arc::clone(rotations.group()), 3, 0);
    let f = embed_subgroup(&rotations, &local)?;
    let blocks = coset_block_structure(&rotations, &f)?;
    println!(
        "λ(ιf) on D4: {} blocks of size {}, exact: {}",
        blocks.block_count, blocks.block_size, blocks.exact
    );
    for p in [1.5, 3.0] {
        let r = check_subgroup_isometry(&rotations, &f, p, &cfg, DEFAULT_TOL)?;
        println!(
            "  p = {p}: N^G = {:.12}  N^H = {:.12}",
            r.details[0].measured["norm_group"], r.details[0].measured["norm_subgroup"]
        );
    }

    let center = subgroup(&d4, &d4.center())?;
    let q = quotient(&center)?;
    let f = seeded_element(Arc::clone(&d4), 3, 1);
    let pushed = push_quotient(&center, &q, &f)?;
    println!(
        "\nλ(T_N f) is {}x{}",
        regular_matrix(&pushed).dim(),
        regular_matrix(&pushed).dim()
    );
    for p in [1.5, 2.0, 3.0] {
        let r = check_quotient_contraction(&center, &f, p, &cfg, DEFAULT_TOL)?;
        println!(
            "  p = {p}: N^(G/N)(T_N f) = {:.10} ≤ N^G(f) = {:.10}  square residual {:.1e}",
            regular_pnorm(&pushed, p, &cfg)?.lower,
            regular_pnorm(&f, p, &cfg)?.lower,
            r.details[0].measured["square_residual"]
        );
    }
    Ok(())
}
