//! Norm curve `p ↦ ‖λ_p(f)‖` of a random element of S3, written as JSON for
//! the element and CSV for the curve, then checked for monotonicity on each
//! side of 2 and log-convexity in `1/p`.

use std::sync::Arc;

use lplab::algebra::seeded_element;
use lplab::analysis::{check_herz_monotone, check_log_convexity, norm_curve, DEFAULT_GRID, DEFAULT_TOL};
use lplab::group::parse_group_spec;
use lplab::io::element_to_json;
use lplab::pnorm::EstimatorConfig;

fn main() -> lplab::Result<()> {
    let g = Arc::new(parse_group_spec("S3")?);
    let f = seeded_element(g, 42, 0);
    print!("element: {}", element_to_json(&f)?);

    let grid: Vec<f64> = DEFAULT_GRID.iter().copied().chain([6.0, 10.0]).collect();
    let curve = norm_curve(&f, &grid, &EstimatorConfig::default())?;
    println!("\n{}", curve.to_csv());

    let herz = check_herz_monotone(&curve, DEFAULT_TOL);
    let convex = check_log_convexity(&curve, DEFAULT_TOL)?;
    println!(
        "monotone on each side of 2: {} (worst {:.2e})",
        herz.pass, herz.worst_violation
    );
    println!(
        "log-convex in 1/p:          {} (worst {:.2e})",
        convex.pass, convex.worst_violation
    );
    Ok(())
}
