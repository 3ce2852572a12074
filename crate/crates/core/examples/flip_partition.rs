//! Flips the smallest example partition of K_4 across every face, then
//! checks that flipping twice returns the original.
//!
//!     cargo run --example flip_partition

use lambda_s2::flips::flip;
use lambda_s2::model::{faces, EdgePartition};

fn main() -> lambda_s2::Result<()> {
    let p0 =
        EdgePartition::from_classes(4, &[&[(1, 2), (1, 4), (2, 3)], &[(1, 3), (2, 4), (3, 4)]])?;
    println!("P0 = {p0}");
    for face in faces(4) {
        let q = flip(&p0, face)?;
        let back = flip(&q, face)?;
        println!("  flip across {face}: {q}  (involution: {})", back == p0);
    }
    Ok(())
}
