//! Counts homogeneous and cycle-free partitions of K_2d for d = 1..=3 and
//! prints the tree shapes of the first few cycle-free 3-partitions.
//!
//!     cargo run --example enumerate_counts

use lambda_s2::enumeration::{enumerate, multinomial};
use lambda_s2::symmetry::shapes;

fn main() -> lambda_s2::Result<()> {
    for d in 1..=3 {
        let all = enumerate(d, false)?;
        let cf = enumerate(d, true)?;
        let expected = multinomial(&vec![2 * d - 1; d]).unwrap();
        println!(
            "d = {d}: {} homogeneous (multinomial {expected}), {} cycle-free",
            all.len(),
            cf.len()
        );
    }

    let set = enumerate(3, true)?;
    for p in set.iter().take(5) {
        let s: Vec<String> = shapes(&p).unwrap().iter().map(|t| t.to_string()).collect();
        println!("{p}  shapes {}", s.join(" "));
    }
    Ok(())
}
