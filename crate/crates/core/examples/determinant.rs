//! Evaluates Det^{S²} on E_2, E_3 and random rational inputs, and shows the
//! permutation and GL_d transformation laws.
//!
//!     cargo run --example determinant

use lambda_s2::algebra::{
    act_matrix, act_on_tensor, det2_explicit, determinant, e_tensor, rational, Determinant,
    TensorInput,
};
use lambda_s2::pipeline::signature;
use lambda_s2::symmetry::Perm;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_input(d: usize, rng: &mut ChaCha8Rng) -> TensorInput<BigRational> {
    let vectors = (0..d * (2 * d - 1))
        .map(|_| {
            (0..d)
                .map(|_| rational(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                .collect()
        })
        .collect();
    TensorInput::new(d, vectors).unwrap()
}

fn main() -> lambda_s2::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let one = rational(1, 1);

    let det2 = Determinant::new(&signature(2)?);
    let det3 = Determinant::new(&signature(3)?);
    println!("Det(E_2) = {}", det2.eval(&e_tensor(2, &one))?);
    println!("Det(E_3) = {}", det3.eval(&e_tensor(3, &one))?);

    let x = random_input(2, &mut rng);
    println!(
        "random d = 2: Det = {}, explicit = {}",
        det2.eval(&x)?,
        det2_explicit(&x)?
    );

    let x = random_input(3, &mut rng);
    let sigma = Perm::random(6, &mut rng);
    println!(
        "d = 3, σ = {sigma}: Det(X) = {}, Det(σ⇀X) = {}",
        det3.eval(&x)?,
        det3.eval(&act_on_tensor(&sigma, &x)?)?
    );

    let t: Vec<Vec<BigRational>> = (0..3)
        .map(|_| (0..3).map(|_| rational(rng.gen_range(-2..=2), 1)).collect())
        .collect();
    let lhs = det3.eval(&act_matrix(&t, &x)?)?;
    let rhs = num_traits::pow(determinant(&t), 5) * det3.eval(&x)?;
    println!("Det(T*X) = {lhs}, det(T)^5 Det(X) = {rhs}");
    Ok(())
}
