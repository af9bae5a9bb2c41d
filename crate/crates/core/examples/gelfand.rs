//! On an abelian group the characters diagonalize `λ(f)`, so the spectral norm
//! is `max|f̂|`, and every `p`-norm sits between that and `‖f‖₁`.

use std::sync::Arc;

use lplab::algebra::seeded_element;
use lplab::analysis::regular_pnorm;
use lplab::gelfand::{characters, diagonalization_residual, fourier, plancherel_residual};
use lplab::group::parse_group_spec;
use lplab::pnorm::EstimatorConfig;

fn main() -> lplab::Result<()> {
    let cfg = EstimatorConfig::default();
    let g = Arc::new(parse_group_spec("Z2xZ4")?);
    let table = characters(&g)?;
    println!(
        "{} characters, multiplicativity defect {:.1e}, orthogonality defect {:.1e}",
        table.len(),
        table.multiplicativity_defect(),
        table.orthogonality_defect()
    );

    let f = seeded_element(Arc::clone(&g), 11, 0);
    let hat = fourier(&table, &f)?;
    let max_hat = hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (off, diag) = diagonalization_residual(&table, &f)?;
    println!("U λ(f) Uᴴ: off-diagonal {off:.1e}, diagonal vs f̂ {diag:.1e}");
    println!("Plancherel residual {:.1e}", plancherel_residual(&table, &f)?);
    println!("max|f̂| = {max_hat:.12}  ‖f‖₁ = {:.12}", f.l1_norm());
    for p in [1.0, 1.5, 2.0, 3.0, 8.0] {
        println!("  N_{p:<3} = {:.12}", regular_pnorm(&f, p, &cfg)?.lower);
    }

    let s3 = Arc::new(parse_group_spec("S3")?);
    println!("\ncharacters of S3: {:?}", characters(&s3).err());
    Ok(())
}
