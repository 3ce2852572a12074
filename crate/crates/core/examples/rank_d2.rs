//! Dimension of the d = 2 quotient: 64 basis tensors modulo all 128 face
//! relations, over a few prime fields.
//!
//!     cargo run --example rank_d2

use lambda_s2::algebra::rank_certify_d2;

fn main() -> lambda_s2::Result<()> {
    for p in [5, 7, 101, 1_000_003] {
        let r = rank_certify_d2(p)?;
        println!(
            "GF({p}): rank {} of {} relations, dimension {}",
            r.rank, r.relations, r.dimension
        );
    }
    Ok(())
}
