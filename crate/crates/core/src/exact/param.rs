//! Polynomials in formal parameters `z, w, ...` over the rationals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_rational, CoeffRepr, Ring};

const NAMES: [&str; 4] = ["z", "w", "u", "v"];

/// Display name of parameter `i`: `z, w, u, v`, then `z4, z5, ...`.
pub fn param_name(i: usize) -> String {
    match NAMES.get(i) {
        Some(s) => String::from(*s),
        None => alloc::format!("z{i}"),
    }
}

/// Exponent vector with trailing zeros removed, so that polynomials in
/// different numbers of parameters compare and combine directly.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ParamMonomial(Vec<u32>);

impl ParamMonomial {
    fn new(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        ParamMonomial(v)
    }

    fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let v = (0..len)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        ParamMonomial::new(v)
    }
}

impl Ord for ParamMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for i in 0..len {
                let a = self.0.get(i).copied().unwrap_or(0);
                let b = other.0.get(i).copied().unwrap_or(0);
                // Higher power of the first parameter sorts first within a degree.
                match b.cmp(&a) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in formal parameters with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(ParamMonomial(Vec::new()), c);
        p
    }

    pub fn from_int(v: i64) -> Self {
        ParamPoly::constant(BigRational::from_integer(BigInt::from(v)))
    }

    /// The parameter with index `i` (0 is `z`).
    pub fn param(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = ParamPoly::zero();
        p.add_term(ParamMonomial::new(e), BigRational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigRational)>>(terms: I) -> Self {
        let mut p = ParamPoly::zero();
        for (e, c) in terms {
            p.add_term(ParamMonomial::new(e), c);
        }
        p
    }

    fn add_term(&mut self, m: ParamMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            entry.is_zero()
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.0.is_empty())
    }

    /// The value when the polynomial has no parameter dependence.
    pub fn constant_value(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(ParamMonomial::degree).max()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Number of parameters referenced (one past the highest index used).
    pub fn nparams(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Evaluates at a point; missing coordinates are taken as zero.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                let x = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                for _ in 0..e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            let mag = c.abs();
            let has_vars = !m.0.is_empty();
            if !has_vars || !mag.is_one() {
                f.write_str(&format_rational(&mag))?;
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => f.write_str(&param_name(i))?,
                    _ => write!(f, "{}^{}", param_name(i), e)?,
                }
            }
        }
        Ok(())
    }
}

/// Generalized binomial coefficient `top (top-1) ... (top-j+1) / j!`,
/// a polynomial of degree `j * deg(top)` in the parameters.
pub fn binomial_param(top: &ParamPoly, j: u32) -> ParamPoly {
    let mut acc = ParamPoly::one();
    let mut fact = BigInt::one();
    for i in 0..j {
        acc = acc.mul(&top.sub(&ParamPoly::from_int(i as i64)));
        fact *= BigInt::from(i + 1);
    }
    acc.scale(&BigRational::new(BigInt::one(), fact))
}

/// Ring structure on [`ParamPoly`]; the number of parameters is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParamRing;

impl Ring for ParamRing {
    type Elem = ParamPoly;

    fn zero(&self) -> ParamPoly {
        ParamPoly::zero()
    }
    fn one(&self) -> ParamPoly {
        ParamPoly::one()
    }
    fn is_zero(&self, a: &ParamPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
        a.add(b)
    }
    fn sub(&self, a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
        a.sub(b)
    }
    fn neg(&self, a: &ParamPoly) -> ParamPoly {
        a.neg()
    }
    fn mul(&self, a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
        a.mul(b)
    }
    fn from_bigint(&self, v: &BigInt) -> ParamPoly {
        ParamPoly::constant(BigRational::from_integer(v.clone()))
    }
    fn coeff_repr(&self, a: &ParamPoly) -> CoeffRepr {
        match a.constant_value() {
            Some(c) => CoeffRepr {
                negative: c.is_negative(),
                magnitude: format_rational(&c.abs()),
                compound: false,
            },
            None => CoeffRepr {
                negative: false,
                magnitude: alloc::format!("{a}"),
                compound: true,
            },
        }
    }
}
