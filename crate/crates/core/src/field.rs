//! Coefficient fields: small prime fields for the combinatorial search and
//! exact rationals for rank and kernel work.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FieldError;

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    /// The `i`-th element in a fixed enumeration; only meaningful for finite fields.
    fn element(&self, i: u64) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
    /// Parses `n` or `n/d`.
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p < 2 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The smallest prime strictly larger than this one.
    pub fn next(&self) -> PrimeField {
        let mut q = self.p + 1;
        while !is_prime(q) {
            q += 1;
        }
        PrimeField { p: q }
    }

    #[inline]
    fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce(v)
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (*a as u64, self.p as u64 - 2, 1u64);
        let p = self.p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(acc as u32)
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }
    fn element(&self, i: u64) -> u32 {
        (i % self.p as u64) as u32
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u32, FieldError> {
        let bad = || FieldError::BadScalar(s.to_string());
        match s.split_once('/') {
            None => Ok(self.reduce(s.trim().parse::<i64>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n = self.reduce(n.trim().parse::<i64>().map_err(|_| bad())?);
                let d = self.reduce(d.trim().parse::<i64>().map_err(|_| bad())?);
                let di = self.inv(&d).ok_or_else(bad)?;
                Ok(self.mul(&n, &di))
            }
        }
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
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
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn element(&self, i: u64) -> BigRational {
        // 0, 1, -1, 2, -2, ...
        let k = (i as i64 + 1) / 2;
        self.from_i64(if i % 2 == 1 { k } else { -k })
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let bad = || FieldError::BadScalar(s.to_string());
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(int(s)?)),
            Some((n, d)) => {
                let d = int(d)?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(int(n)?, d))
            }
        }
    }
}
