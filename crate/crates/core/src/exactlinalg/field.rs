use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use strength_reduce::StrengthReducedU64;

use crate::error::{Error, Result};

/// 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Largest prime below 2^32, used when a computation is retried with a larger modulus.
pub const RETRY_PRIME: u64 = 4_294_967_291;

/// Smallest prime accepted by [`FieldConfig::checked_prime`].
pub const MIN_DEFAULT_PRIME: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// The base field used for a computation: the rationals, or `Z/pZ` with `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldConfig {
    pub kind: FieldKind,
    pub prime: Option<u64>,
}

impl FieldConfig {
    pub fn rationals() -> Self {
        FieldConfig {
            kind: FieldKind::Rationals,
            prime: None,
        }
    }

    /// Any prime `2 <= p < 2^32`. Small primes are accepted for experiments; callers
    /// that need the char-0 certification should go through [`FieldConfig::checked_prime`].
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..(1u64 << 32)).contains(&p) {
            return Err(Error::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldConfig {
            kind: FieldKind::PrimeField,
            prime: Some(p),
        })
    }

    /// A prime field with `p > 2^20`.
    pub fn checked_prime(p: u64) -> Result<Self> {
        if p <= MIN_DEFAULT_PRIME {
            return Err(Error::InvalidInput(format!(
                "prime {p} is below the default lower bound 2^20"
            )));
        }
        Self::prime(p)
    }

    pub fn default_prime() -> Self {
        FieldConfig {
            kind: FieldKind::PrimeField,
            prime: Some(DEFAULT_PRIME),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.kind == FieldKind::PrimeField
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        self.prime.unwrap_or(0)
    }

    /// Multinomial coefficients of degree `d` must be invertible.
    pub fn check_degree(&self, d: usize) -> Result<()> {
        match self.prime {
            Some(p) if p <= d as u64 => Err(Error::PrimeTooSmall {
                prime: p,
                degree: d,
            }),
            _ => Ok(()),
        }
    }

    /// A different prime field, for re-running an inconclusive rank computation.
    pub fn retry_field(&self) -> FieldConfig {
        let next = match self.prime {
            Some(RETRY_PRIME) => 4_294_967_279,
            _ => RETRY_PRIME,
        };
        FieldConfig {
            kind: FieldKind::PrimeField,
            prime: Some(next),
        }
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::default_prime()
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prime {
            Some(p) => write!(f, "Z/{p}"),
            None => write!(f, "Q"),
        }
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Arithmetic of a concrete field. Matrix assembly is written once against this trait.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn config(&self) -> FieldConfig;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// `None` when the denominator vanishes in the field.
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// Canonical representative as a rational (an integer in `[0, p)` for prime fields).
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn convert_all(&self, qs: &[BigRational]) -> Option<Vec<Self::Elem>> {
        qs.iter().map(|q| self.from_rational(q)).collect()
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn config(&self) -> FieldConfig {
        FieldConfig::rationals()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

/// `Z/pZ` for a prime `p < 2^32`, so products of two residues fit in a `u64`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
    reducer: StrengthReducedU64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!((2..(1u64 << 32)).contains(&p));
        PrimeField {
            p,
            reducer: StrengthReducedU64::new(p),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.reducer
    }

    /// `a + b*c mod p` for reduced inputs.
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        (a + b * c) % self.reducer
    }

    pub fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn config(&self) -> FieldConfig {
        FieldConfig {
            kind: FieldKind::PrimeField,
            prime: Some(self.p),
        }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.reducer
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        pow_mod_u64(*a, self.p - 2, self.p)
    }
    fn from_i64(&self, v: i64) -> u64 {
        let p = self.p as i128;
        (((v as i128) % p + p) % p) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce_bigint(q.denom());
        if den == 0 {
            return None;
        }
        let num = self.reduce_bigint(q.numer());
        Some(self.mul(&num, &self.inv(&den)))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
}

/// Scales a rational vector by the lcm of its denominators; the result is an integer
/// vector proportional to the input.
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| (q.numer() * &lcm) / q.denom()).collect()
}

/// Rescales a nonzero rational vector to a primitive integer vector with positive
/// first nonzero entry.
pub fn primitive_integer_vector(row: &[BigRational]) -> Vec<BigInt> {
    let mut ints = clear_denominators(row);
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() {
        for v in ints.iter_mut() {
            *v = &*v / &g;
        }
    }
    if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in ints.iter_mut() {
                *v = -&*v;
            }
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn primality() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime(RETRY_PRIME));
        assert!(is_prime(4_294_967_279));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert!(!is_prime(DEFAULT_PRIME * 3));
        assert!(is_prime(1_000_003));
    }

    #[test]
    fn config_validation() {
        assert!(matches!(FieldConfig::prime(12), Err(Error::NotPrime(12))));
        assert!(matches!(
            FieldConfig::prime(1 << 33),
            Err(Error::PrimeOutOfRange(_))
        ));
        assert!(FieldConfig::checked_prime(7).is_err());
        assert!(FieldConfig::checked_prime(1_000_003).is_err());
        assert!(FieldConfig::checked_prime(DEFAULT_PRIME).is_ok());
        assert!(FieldConfig::prime(7).unwrap().check_degree(7).is_err());
        assert_eq!(
            FieldConfig::default_prime().retry_field().prime,
            Some(RETRY_PRIME)
        );
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7);
        assert_eq!(f.from_rational(&q(1, 2)), Some(4));
        assert_eq!(f.from_rational(&q(3, 14)), None);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&f.inv(&3), &3), 1);
        assert_eq!(f.pow(&3, 6), 1);
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[q(-1, 2), q(1, 3), q(0, 1)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }
}
