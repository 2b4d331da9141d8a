//! Exact scalar arithmetic.
//!
//! Two coefficient fields are supported: the rationals (arbitrary precision,
//! always reduced) and prime fields `F_p` with residues kept in `[0, p)`.
//! Both implement [`Field`]; polynomial and linear-algebra code is generic
//! over it. [`ParamRing`] adds polynomials in formal parameters over the
//! rationals, used for formal twist exponents.

mod param;
mod prime;

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use param::{binomial_param, param_name, ParamPoly, ParamRing};
pub use prime::{is_prime, primes_up_to};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator of {0} is not invertible modulo {1}")]
    DenominatorNotInvertible(String, u64),
    #[error("invalid field `{0}` (expected `q` or `fp:P`)")]
    BadField(String),
}

/// How a coefficient is rendered inside a polynomial term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRepr {
    pub negative: bool,
    /// Absolute value (or full text when `compound`).
    pub magnitude: String,
    /// True when the coefficient must be parenthesised before a variable.
    pub compound: bool,
}

/// A commutative ring with identity whose elements are plain values.
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn coeff_repr(&self, a: &Self::Elem) -> CoeffRepr;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// A field: every nonzero element is invertible.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ExactError>;
    /// 0 for the rationals, `p` for `F_p`.
    fn characteristic(&self) -> u64;
    /// Image of a rational; fails when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, ExactError>;
    fn kind(&self) -> FieldKind;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ExactError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// Runtime description of a coefficient field, as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

impl FieldKind {
    pub fn characteristic(self) -> u64 {
        match self {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => f.write_str("q"),
            FieldKind::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldKind::Rationals);
        }
        let p = t
            .strip_prefix("fp:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| ExactError::BadField(s.to_string()))?;
        if !is_prime(p) {
            return Err(ExactError::NotPrime(p));
        }
        Ok(FieldKind::Prime(p))
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

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
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn coeff_repr(&self, a: &BigRational) -> CoeffRepr {
        CoeffRepr {
            negative: a.is_negative(),
            magnitude: format_rational(&a.abs()),
            compound: false,
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Result<BigRational, ExactError> {
        if a.is_zero() {
            Err(ExactError::ZeroInverse)
        } else {
            Ok(a.recip())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, ExactError> {
        Ok(q.clone())
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }
}

/// `a` or `a/b`, the textual form used by the polynomial grammar.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// The prime field `F_p`, residues stored as `u64` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ExactError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(ExactError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of an arbitrary `u64`.
    pub fn elem(&self, v: u64) -> u64 {
        v % self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (s, carry) = a.overflowing_add(*b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        self.reduce_bigint(v)
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn coeff_repr(&self, a: &u64) -> CoeffRepr {
        CoeffRepr {
            negative: false,
            magnitude: a.to_string(),
            compound: false,
        }
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Result<u64, ExactError> {
        let a = *a % self.p;
        if a == 0 {
            return Err(ExactError::ZeroInverse);
        }
        // Extended Euclid on signed 128-bit values.
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, ExactError> {
        let den = self.reduce_bigint(q.denom());
        let inv = self.inv(&den).map_err(|_| {
            ExactError::DenominatorNotInvertible(format_rational(q), self.p)
        })?;
        Ok(self.mul(&self.reduce_bigint(q.numer()), &inv))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
}
