//! Sums the signature over every face relation. Pass `sample N SEED` to
//! check a seeded random subset instead.
//!
//!     cargo run --example relation_sweep -- 3
//!     cargo run --example relation_sweep -- 3 sample 100000 7

use lambda_s2::algebra::{relation_count, verify_relations, RelationMode};
use lambda_s2::pipeline::signature;

fn main() -> lambda_s2::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: usize = args.first().map_or(3, |s| s.parse().expect("d"));
    let mode = match args.get(1).map(String::as_str) {
        Some("sample") => RelationMode::Sample {
            count: args[2].parse().expect("count"),
            seed: args[3].parse().expect("seed"),
        },
        _ => RelationMode::Full,
    };
    println!("d = {d}: {} relation instances in total", relation_count(d));
    let report = verify_relations(&signature(d)?, mode)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
