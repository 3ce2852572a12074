//! For d = 2, compares Det^{S²}(X) = 0 with the existence of nonzero λ
//! balancing every face, on E_2, a quadrilateral and random inputs.
//!
//!     cargo run --example geometric_d2

use lambda_s2::algebra::{
    e_tensor, geometric_check_d2, quadrilateral_input, rational, Determinant, TensorInput,
};
use lambda_s2::pipeline::signature;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lambda_s2::Result<()> {
    let det = Determinant::new(&signature(2)?);
    let e2 = geometric_check_d2(&det, &e_tensor(2, &rational(1, 1)))?;
    println!(
        "E_2: det_zero = {}, lambda_exists = {}",
        e2.det_zero, e2.lambda_exists
    );

    let pts = [
        [rational(0, 1), rational(0, 1)],
        [rational(4, 1), rational(1, 1)],
        [rational(3, 1), rational(5, 2)],
        [rational(-1, 2), rational(3, 1)],
    ];
    let quad = geometric_check_d2(&det, &quadrilateral_input(&pts))?;
    let lambda: Vec<String> = quad
        .lambda_witness
        .iter()
        .flatten()
        .map(|l| l.to_string())
        .collect();
    println!(
        "quadrilateral: det_zero = {}, λ = [{}]",
        quad.det_zero,
        lambda.join(", ")
    );

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut zero, mut agree) = (0, 0);
    for _ in 0..200 {
        let vectors = (0..6)
            .map(|_| (0..2).map(|_| rational(rng.gen_range(-1..=1), 1)).collect())
            .collect();
        let r = geometric_check_d2(&det, &TensorInput::new(2, vectors)?)?;
        zero += usize::from(r.det_zero);
        agree += usize::from(r.agrees());
    }
    println!("200 random inputs: {zero} with Det = 0, {agree} agree");
    Ok(())
}
