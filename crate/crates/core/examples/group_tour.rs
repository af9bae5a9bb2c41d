//! Builds the standard groups, a few subgroups and a quotient, and prints
//! their basic invariants.

use std::sync::Arc;

use lplab::group::{generated_subgroup, parse_group_spec, quotient, subgroup};

fn main() -> lplab::Result<()> {
    for spec in ["Z6", "D4", "S3", "Q8", "Z2xZ4", "S3xZ2"] {
        let g = Arc::new(parse_group_spec(spec)?);
        let orders: Vec<usize> = g.elements().map(|s| g.element_order(s)).collect();
        println!(
            "{:<6} order {:>2}  abelian {:<5}  center {:?}  element orders {:?}",
            g.name(),
            g.order(),
            g.is_commutative(),
            g.center(),
            orders
        );
    }

    let s3 = Arc::new(parse_group_spec("S3")?);
    println!("\nS3 labels: {:?}", s3.labels());
    let a3 = generated_subgroup(&s3, &[3])?;
    println!("A3 = {:?}, normal: {}", a3.member_ids(), a3.is_normal());
    println!("right cosets of A3: {:?}", a3.right_cosets());
    let q = quotient(&a3)?;
    println!("S3/A3 has order {}, projection {:?}", q.group.order(), q.projection);

    let transposition = subgroup(&s3, &[0, 1])?;
    println!("<(2 3)> normal: {}", transposition.is_normal());
    println!("quotient by it: {:?}", quotient(&transposition).err());

    let d4 = Arc::new(parse_group_spec("D4")?);
    let z = subgroup(&d4, &d4.center())?;
    let q = quotient(&z)?;
    println!(
        "\nD4/Z(D4) has order {} and is abelian: {}",
        q.group.order(),
        q.group.is_commutative()
    );
    Ok(())
}
