use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default prime for finite-field evaluation.
pub const DEFAULT_PRIME: u64 = 101;

/// Exact scalar arithmetic shared by rationals and prime fields.
///
/// Constants are produced from an existing value because a residue carries
/// its modulus.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64_like(&self, v: i64) -> Self;
    fn is_zero_value(&self) -> bool;
    fn inverse(&self) -> Option<Self>;

    fn zero_like(&self) -> Self {
        self.from_i64_like(0)
    }

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_i64_like(&self, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((_, den)) = t.split_once('/') {
        if BigInt::from_str(den.trim()).is_ok_and(|d| d.is_zero()) {
            return Err(Error::input(format!("zero denominator in {s:?}")));
        }
    }
    BigRational::from_str(t).map_err(|_| Error::input(format!("not a rational number: {s:?}")))
}

/// Residue modulo a prime `p > 3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp {
            value: (v as i128).rem_euclid(p as i128) as u64,
            p,
        }
    }

    pub fn from_bigint(v: &BigInt, p: u64) -> Self {
        let r = v % BigInt::from(p);
        let r = if r.is_negative() {
            r + BigInt::from(p)
        } else {
            r
        };
        Fp {
            value: r.to_u64().expect("residue fits"),
            p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }
}

/// Accepts `p` as a field characteristic: prime and not 2 or 3.
pub fn check_modulus(p: u64) -> Result<()> {
    if p <= 3 {
        return Err(Error::input(format!(
            "characteristic {p} is not allowed; the field must have char != 2, 3"
        )));
    }
    if p >= 1 << 62 {
        return Err(Error::input(format!(
            "modulus {p} is too large (limit 2^62)"
        )));
    }
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    Ok(())
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let s = self.value + o.value;
        Fp {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self + (-o)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.p - self.value
            },
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp {
            value: mul_mod(self.value, o.value, self.p),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl Scalar for Fp {
    fn from_i64_like(&self, v: i64) -> Self {
        Fp::new(v, self.p)
    }

    fn is_zero_value(&self) -> bool {
        self.value == 0
    }

    fn inverse(&self) -> Option<Self> {
        (self.value != 0).then(|| Fp {
            value: pow_mod(self.value, self.p - 2, self.p),
            p: self.p,
        })
    }
}

/// A scalar of either supported field, for results crossing the CLI.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldScalar {
    Rational(BigRational),
    Gf(Fp),
}

impl FieldScalar {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Gf(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Gf(x) => x.value == 1,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => write!(f, "{r}"),
            FieldScalar::Gf(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn modulus_guard() {
        assert!(check_modulus(2).is_err());
        assert!(check_modulus(3).is_err());
        assert!(check_modulus(9).is_err());
        check_modulus(5).unwrap();
        check_modulus(101).unwrap();
    }

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(-3, 101);
        assert_eq!(a.value(), 98);
        assert_eq!((a * a.inverse().unwrap()).value(), 1);
        assert_eq!((a + Fp::new(3, 101)).value(), 0);
        assert_eq!(Fp::from_bigint(&BigInt::from(-205), 101).value(), 98);
        assert_eq!(Fp::new(2, 101).pow(10).value(), 1024 % 101);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rational(-4, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
