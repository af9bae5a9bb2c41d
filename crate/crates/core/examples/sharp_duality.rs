//! `λ(f♯)` is the transpose of `λ(f)`, so `‖λ_p(f♯)‖ = ‖λ_{p'}(f)‖`. On an
//! abelian group `f♯` and `f` have the same norms; on S3 they do not.

use std::sync::Arc;

use lplab::algebra::seeded_element;
use lplab::analysis::{check_sharp_duality, regular_pnorm, DEFAULT_TOL};
use lplab::group::parse_group_spec;
use lplab::operators::{max_abs_diff, regular_matrix};
use lplab::pnorm::{conjugate_exponent, EstimatorConfig};

fn main() -> lplab::Result<()> {
    let cfg = EstimatorConfig::default();
    for spec in ["Z6", "S3"] {
        let g = Arc::new(parse_group_spec(spec)?);
        let f = seeded_element(g, 7, 0);
        let transpose_gap = max_abs_diff(
            &regular_matrix(&f.sharp()).entries,
            &regular_matrix(&f).entries.transpose(),
        );
        println!("{spec}: |λ(f♯) − λ(f)ᵀ| = {transpose_gap}");
        for p in [1.5, 3.0] {
            let q = conjugate_exponent(p);
            let report = check_sharp_duality(&f, p, &cfg, DEFAULT_TOL)?;
            let np = regular_pnorm(&f, p, &cfg)?.lower;
            let nq = regular_pnorm(&f, q, &cfg)?.lower;
            println!(
                "  p = {p}: N_p(f♯) = {:.12}  N_p'(f) = {:.12}  pass {}  |N_p(f) − N_p'(f)| = {:.3e}",
                report.details[0].measured["norm_p_sharp"],
                report.details[0].measured["norm_p_conjugate"],
                report.pass,
                (np - nq).abs()
            );
        }
    }
    Ok(())
}
