use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::field::{is_prime, mul_mod, pow_mod};
use super::{Fp, Scalar, TensorInput};
use crate::enumeration::PartitionSet;
use crate::error::{Error, Result};
use crate::flips::SignatureTable;

/// `det2_explicit(X) = DET2_EXPLICIT_SIGN · Det^{S²}(X)` for `d = 2`.
///
/// Measured by comparing both on random inputs (see the tests); the printed
/// twelve-term polynomial is the negative of the partition sum anchored at
/// `ε(E_2) = +1`.
pub const DET2_EXPLICIT_SIGN: i64 = -1;

/// Scalars `Det^{S²}` can be evaluated over.
pub trait DetScalar: Scalar {
    #[doc(hidden)]
    fn monomial_sum(det: &Determinant, x: &TensorInput<Self>) -> Self;
}

/// `Det^{S²}` for one `d`: the signed partition list it sums over.
#[derive(Clone, Debug)]
pub struct Determinant {
    d: usize,
    set: Arc<PartitionSet>,
    signs: Vec<i8>,
}

impl Determinant {
    pub fn new(sig: &SignatureTable) -> Self {
        let set = Arc::clone(sig.set());
        let signs = sig.signs().iter().map(|s| s.value() as i8).collect();
        Determinant {
            d: set.d(),
            set,
            signs,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> usize {
        self.signs.len()
    }

    /// `Σ_P ε(P) Π_{edges} (coordinate of v_edge selected by its color)`.
    pub fn eval<F: DetScalar>(&self, x: &TensorInput<F>) -> Result<F> {
        if x.d() != self.d {
            return Err(Error::input(format!(
                "Det^{{S²}} for d = {} applied to an input with d = {}",
                self.d,
                x.d()
            )));
        }
        Ok(F::monomial_sum(self, x))
    }

    fn sum_i128(&self, table: &[i128]) -> i128 {
        let d = self.d;
        (0..self.set.len())
            .into_par_iter()
            .with_min_len(4096)
            .map(|k| {
                let mut prod = self.signs[k] as i128;
                for (e, &c) in self.set.colors(k).iter().enumerate() {
                    prod *= table[e * d + c as usize];
                    if prod == 0 {
                        break;
                    }
                }
                prod
            })
            .sum()
    }

    fn sum_mod(&self, table: &[u64], p: u64) -> u64 {
        let d = self.d;
        let (plus, minus) = (0..self.set.len())
            .into_par_iter()
            .with_min_len(4096)
            .fold(
                || (0u64, 0u64),
                |(plus, minus), k| {
                    let mut prod = 1u64;
                    for (e, &c) in self.set.colors(k).iter().enumerate() {
                        prod = mul_mod(prod, table[e * d + c as usize], p);
                        if prod == 0 {
                            break;
                        }
                    }
                    if self.signs[k] > 0 {
                        ((plus + prod) % p, minus)
                    } else {
                        (plus, (minus + prod) % p)
                    }
                },
            )
            .reduce(|| (0, 0), |a, b| ((a.0 + b.0) % p, (a.1 + b.1) % p));
        (plus + p - minus) % p
    }

    fn sum_bigint(&self, table: &[BigInt]) -> BigInt {
        let d = self.d;
        (0..self.set.len())
            .into_par_iter()
            .map(|k| {
                let mut prod = BigInt::from(self.signs[k]);
                for (e, &c) in self.set.colors(k).iter().enumerate() {
                    prod *= &table[e * d + c as usize];
                }
                prod
            })
            .reduce(BigInt::zero, |a, b| a + b)
    }

    /// Exact integer value of the sum for an integer coordinate table.
    fn sum_integer(&self, table: &[BigInt]) -> BigInt {
        let d = self.d;
        let edges = table.len() / d.max(1);
        let mut bound = BigInt::from(self.set.len().max(1));
        for e in 0..edges {
            let m = table[e * d..(e + 1) * d]
                .iter()
                .map(|x| x.abs())
                .max()
                .unwrap_or_default();
            bound *= m;
        }
        if bound.bits() < 126 {
            let small: Vec<i128> = table
                .iter()
                .map(|x| x.to_i128().expect("bounded"))
                .collect();
            return BigInt::from(self.sum_i128(&small));
        }
        // Chinese remaindering over enough 62-bit primes to cover [-B, B].
        let needed = 2 * bound + 1u32;
        let primes = crt_primes();
        let mut modulus = BigInt::one();
        let mut value = BigInt::zero();
        for &p in primes {
            if modulus >= needed {
                break;
            }
            let residues: Vec<u64> = table
                .iter()
                .map(|x| Fp::from_bigint(x, p).value())
                .collect();
            let r = self.sum_mod(&residues, p);
            let current = Fp::from_bigint(&value, p).value();
            let m_inv = pow_mod(Fp::from_bigint(&modulus, p).value(), p - 2, p);
            let t = mul_mod((r + p - current) % p, m_inv, p);
            value += &modulus * t;
            modulus *= p;
        }
        if modulus < needed {
            return self.sum_bigint(table);
        }
        if &value * 2u32 > modulus {
            value -= &modulus;
        }
        value
    }
}

fn crt_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut k: u64 = (1 << 62) - 1;
        while out.len() < 64 {
            if is_prime(k) {
                out.push(k);
            }
            k -= 2;
        }
        out
    })
}

impl DetScalar for BigRational {
    fn monomial_sum(det: &Determinant, x: &TensorInput<Self>) -> Self {
        let mut table = Vec::with_capacity(x.vectors().len() * x.d());
        let mut denominator = BigInt::one();
        for v in x.vectors() {
            let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            for q in v {
                table.push(q.numer() * (&l / q.denom()));
            }
            denominator *= l;
        }
        BigRational::new(det.sum_integer(&table), denominator)
    }
}

impl DetScalar for Fp {
    fn monomial_sum(det: &Determinant, x: &TensorInput<Self>) -> Self {
        let p = x.vectors()[0][0].modulus();
        let table: Vec<u64> = x.vectors().iter().flatten().map(|f| f.value()).collect();
        Fp::new(det.sum_mod(&table, p) as i64, p)
    }
}

/// `Det^{S²}(X)` with the signature table's partitions and signs.
pub fn det_eval<F: DetScalar>(x: &TensorInput<F>, sig: &SignatureTable) -> Result<F> {
    Determinant::new(sig).eval(x)
}

/// The twelve monomials of the explicit `d = 2` formula; `a` is the `e_1`
/// coordinate and `b` the `e_2` coordinate of `v_{i,j}`.
const DET2_TERMS: [(i64, &str); 12] = [
    (1, "a12 a23 a34 b13 b24 b14"),
    (1, "a12 b23 a34 b13 b24 a14"),
    (1, "a12 b23 b34 a13 a24 b14"),
    (1, "b12 b23 a34 a13 a24 b14"),
    (1, "b12 a23 b34 b13 a24 a14"),
    (1, "b12 a23 b34 a13 b24 a14"),
    (-1, "b12 b23 b34 a13 a24 a14"),
    (-1, "b12 a23 b34 a13 a24 b14"),
    (-1, "b12 a23 a34 b13 b24 a14"),
    (-1, "a12 a23 b34 b13 b24 a14"),
    (-1, "a12 b23 a34 a13 b24 b14"),
    (-1, "a12 b23 a34 b13 a24 b14"),
];

/// Direct evaluation of the printed twelve-term polynomial for `d = 2`.
pub fn det2_explicit<F: Scalar>(x: &TensorInput<F>) -> Result<F> {
    if x.d() != 2 {
        return Err(Error::input("det2_explicit needs d = 2"));
    }
    let unit = &x.vectors()[0][0];
    let mut total = unit.zero_like();
    for (sign, term) in DET2_TERMS {
        let mut prod = unit.from_i64_like(sign);
        for factor in term.split_whitespace() {
            let b = factor.as_bytes();
            let coord = usize::from(b[0] == b'b');
            let (i, j) = ((b[1] - b'0') as usize, (b[2] - b'0') as usize);
            prod = prod * x.at(i, j)[coord].clone();
        }
        total = total + prod;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_e, e_tensor, rational};
    use crate::enumeration::enumerate;
    use crate::flips::FlipGraph;
    use crate::flips::Sign;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d2_signature() -> SignatureTable {
        let set = Arc::new(enumerate(2, true).unwrap());
        let g = FlipGraph::build(set).unwrap();
        g.check_bipartite(&[(build_e(2), Sign::Plus)])
            .unwrap()
            .signature()
            .unwrap()
    }

    fn random_q(d: usize, rng: &mut ChaCha8Rng) -> TensorInput<BigRational> {
        let vectors = (0..d * (2 * d - 1))
            .map(|_| {
                (0..d)
                    .map(|_| rational(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
                    .collect()
            })
            .collect();
        TensorInput::new(d, vectors).unwrap()
    }

    /// Plain monomial-by-monomial sum with field operations only.
    fn naive<F: Scalar>(sig: &SignatureTable, x: &TensorInput<F>) -> F {
        let set = sig.set();
        let unit = &x.vectors()[0][0];
        let mut total = unit.zero_like();
        for k in 0..set.len() {
            let mut prod = unit.from_i64_like(sig.sign_at(k).value());
            for (e, &c) in set.colors(k).iter().enumerate() {
                prod = prod * x.vectors()[e][c as usize].clone();
            }
            total = total + prod;
        }
        total
    }

    #[test]
    fn e2_evaluates_to_one() {
        let sig = d2_signature();
        let one = rational(1, 1);
        assert_eq!(det_eval(&e_tensor(2, &one), &sig).unwrap(), one);
        assert_eq!(
            det_eval(&e_tensor(2, &Fp::new(1, 101)), &sig).unwrap(),
            Fp::new(1, 101)
        );
    }

    #[test]
    fn explicit_formula_sign_is_frozen() {
        let sig = d2_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e2 = e_tensor(2, &rational(1, 1));
        assert_eq!(det2_explicit(&e2).unwrap(), rational(-1, 1));
        for _ in 0..100 {
            let x = random_q(2, &mut rng);
            let det = det_eval(&x, &sig).unwrap();
            assert_eq!(
                det2_explicit(&x).unwrap(),
                det * rational(DET2_EXPLICIT_SIGN, 1)
            );
        }
    }

    #[test]
    fn explicit_formula_vanishes_on_face() {
        let mut x = e_tensor(2, &rational(1, 1));
        for k in [0, 1, 3] {
            x.set(k, vec![rational(1, 1), rational(0, 1)]).unwrap();
        }
        assert_eq!(det2_explicit(&x).unwrap(), rational(0, 1));
    }

    #[test]
    fn fast_paths_match_naive_sum() {
        let sig = d2_signature();
        let det = Determinant::new(&sig);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = random_q(2, &mut rng);
            assert_eq!(det.eval(&x).unwrap(), naive(&sig, &x));
        }
        // Large entries force the multimodular path.
        let big = BigInt::from(10).pow(40u32);
        let x = random_q(2, &mut rng).map(|q| q * BigRational::from_integer(big.clone()) + q);
        assert_eq!(det.eval(&x).unwrap(), naive(&sig, &x));
    }

    #[test]
    fn gf_matches_reduced_rational() {
        let sig = d2_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ints: Vec<Vec<i64>> = (0..6)
                .map(|_| (0..2).map(|_| rng.gen_range(-50..=50)).collect())
                .collect();
            let xq = TensorInput::new(
                2,
                ints.iter()
                    .map(|v| v.iter().map(|&a| rational(a, 1)).collect())
                    .collect(),
            )
            .unwrap();
            let xp = TensorInput::new(
                2,
                ints.iter()
                    .map(|v| v.iter().map(|&a| Fp::new(a, 101)).collect())
                    .collect(),
            )
            .unwrap();
            let q = det_eval(&xq, &sig).unwrap();
            assert!(q.is_integer());
            assert_eq!(
                Fp::from_bigint(&q.to_integer(), 101),
                det_eval(&xp, &sig).unwrap()
            );
        }
    }

    #[test]
    fn dimension_mismatch() {
        let sig = d2_signature();
        assert!(det_eval(&e_tensor(3, &rational(1, 1)), &sig).is_err());
        assert!(det2_explicit(&e_tensor(3, &rational(1, 1))).is_err());
    }
}
