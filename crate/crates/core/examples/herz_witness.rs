//! Searches for an element whose norms at `p` and `p'` differ, on each
//! non-abelian group of the default set. Takes about half a minute per
//! group on one core; pass a smaller restart count as the first argument
//! for a quicker run.

use std::sync::Arc;
use std::time::Instant;

use lplab::analysis::{witness_search, SearchConfig};
use lplab::group::parse_group_spec;

fn main() -> lplab::Result<()> {
    let restarts = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let cfg = SearchConfig {
        restarts,
        ..SearchConfig::default()
    };
    for (spec, p) in [("S3", 4.0), ("Q8", 3.0), ("D4", 3.0)] {
        let g = Arc::new(parse_group_spec(spec)?);
        let start = Instant::now();
        let w = witness_search(&g, p, &cfg)?;
        println!(
            "{spec} p = {p}: gap {:.4e}  N_p = {:.10}  N_p' = {:.10}  ({:.1}s)",
            w.gap,
            w.norm_p,
            w.norm_p_conjugate,
            start.elapsed().as_secs_f64()
        );
        let labels = g.labels();
        for (s, z) in w.f.coeffs().iter().enumerate() {
            println!("    {:>6}  {:+.6} {:+.6}i", labels[s], z.re, z.im);
        }
    }
    Ok(())
}
