//! Sparse multivariate polynomials in `x1..xn` over a [`Ring`], with the
//! symmetric group action and remainders modulo powers of `x_i - x_j`.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors in graded
//! lexicographic order, so iteration (and therefore printing) is
//! deterministic. Variable indices in the API are 0-based; printed names
//! are 1-based (`x1`, `x2`, ...).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use thiserror::Error;

use crate::combinat::binomial;
use crate::exact::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("a transposition needs two distinct indices, got {0} twice")]
    DegenerateTransposition(usize),
}

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn swapped(&self, i: usize, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e.swap(i, j);
        Monomial(e)
    }

    /// True when the exponents are weakly decreasing, i.e. the monomial is
    /// the dominant representative of its orbit under permutations.
    pub fn is_sorted_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Swap of two variables, stored with `i < j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    i: usize,
    j: usize,
}

impl Transposition {
    pub fn new(a: usize, b: usize) -> Result<Self, PolyError> {
        match a.cmp(&b) {
            Ordering::Less => Ok(Transposition { i: a, j: b }),
            Ordering::Greater => Ok(Transposition { i: b, j: a }),
            Ordering::Equal => Err(PolyError::DegenerateTransposition(a)),
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// All `n(n-1)/2` transpositions in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Transposition> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| Transposition { i, j }))
    }

    /// The adjacent transpositions `(k, k+1)`, which generate `S_n`.
    pub fn adjacent(n: usize) -> impl Iterator<Item = Transposition> {
        (0..n.saturating_sub(1)).map(|i| Transposition { i, j: i + 1 })
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s({},{})", self.i + 1, self.j + 1)
    }
}

#[derive(Clone)]
pub struct MultiPoly<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(ring: R, nvars: usize) -> Self {
        MultiPoly {
            ring,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: R, nvars: usize, c: R::Elem) -> Self {
        let mut p = MultiPoly::zero(ring, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(ring: R, nvars: usize) -> Self {
        let c = ring.one();
        MultiPoly::constant(ring, nvars, c)
    }

    pub fn var(ring: R, nvars: usize, i: usize) -> Self {
        let mut p = MultiPoly::zero(ring.clone(), nvars);
        p.add_term(Monomial::var(nvars, i), ring.one());
        p
    }

    pub fn monomial(ring: R, exponents: Vec<u32>, c: R::Elem) -> Self {
        let mut p = MultiPoly::zero(ring, exponents.len());
        p.add_term(Monomial(exponents), c);
        p
    }

    /// Sums `(exponents, coefficient)` pairs; repeated exponents accumulate.
    pub fn from_terms<I>(ring: R, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, R::Elem)>,
    {
        let mut p = MultiPoly::zero(ring, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> R::Elem {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: R::Elem) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let s = self.ring.add(slot, &c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = MultiPoly::zero(self.ring.clone(), self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(v, c));
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.ring.clone(), self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<S: Ring, E>(
        &self,
        ring: S,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem, E>,
    ) -> Result<MultiPoly<S>, E> {
        let mut out = MultiPoly::zero(ring, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    fn check_index(&self, index: usize) -> Result<(), PolyError> {
        if index < self.nvars {
            Ok(())
        } else {
            Err(PolyError::IndexOutOfRange {
                index,
                nvars: self.nvars,
            })
        }
    }

    pub fn apply_transposition(&self, t: Transposition) -> Result<Self, PolyError> {
        self.check_index(t.j)?;
        Ok(self.swap_vars(t))
    }

    fn swap_vars(&self, t: Transposition) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.swapped(t.i, t.j), c.clone()))
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Applies the permutation `x_k -> x_{perm[k]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = MultiPoly::zero(self.ring.clone(), self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            for (k, &x) in m.0.iter().enumerate() {
                e[perm[k]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// `(1 - s) F`.
    pub fn antisymmetrize(&self, t: Transposition) -> Result<Self, PolyError> {
        Ok(self - &self.apply_transposition(t)?)
    }

    /// Invariant under every adjacent transposition (hence under `S_n`).
    pub fn is_symmetric(&self) -> bool {
        Transposition::adjacent(self.nvars).all(|t| self.swap_vars(t) == *self)
    }

    /// Remainder of `F` on division by `(x_i - x_j)^e`, viewing `F` as a
    /// polynomial in `x_i`. The divisor is monic in `x_i`, so this is exact
    /// over any coefficient ring; the result has `x_i`-degree below `e`.
    ///
    /// Computed by Taylor expansion at `x_i = x_j`: each `x_i^r` becomes
    /// `sum_k C(r, k) (x_i - x_j)^k x_j^(r-k)`, truncated below `k = e`.
    pub fn rem_pow_diff(&self, t: Transposition, e: u32) -> Self {
        let (i, j) = (t.i, t.j);
        // (k, rest) -> coefficient of (x_i - x_j)^k * x^rest, where rest has x_i = 0.
        let mut taylor: BTreeMap<(u32, Monomial), R::Elem> = BTreeMap::new();
        for (m, c) in &self.terms {
            let r = m.0[i];
            for k in 0..=r.min(e.saturating_sub(1)) {
                if e == 0 {
                    break;
                }
                let mut rest = m.0.clone();
                rest[i] = 0;
                rest[j] += r - k;
                let coef = self.ring.mul(c, &self.ring.from_bigint(&binomial(r as u64, k as u64)));
                let slot = taylor.entry((k, Monomial(rest))).or_insert_with(|| self.ring.zero());
                *slot = self.ring.add(slot, &coef);
            }
        }
        let mut out = MultiPoly::zero(self.ring.clone(), self.nvars);
        for ((k, rest), c) in taylor {
            if self.ring.is_zero(&c) {
                continue;
            }
            // (x_i - x_j)^k = sum_l C(k, l) x_i^l (-x_j)^(k-l)
            for l in 0..=k {
                let mut b = binomial(k as u64, l as u64);
                if (k - l) % 2 == 1 {
                    b = -b;
                }
                let mut ex = rest.0.clone();
                ex[i] += l;
                ex[j] += k - l;
                out.add_term(Monomial(ex), self.ring.mul(&c, &self.ring.from_bigint(&b)));
            }
        }
        out
    }

    /// Exact quotient by `x_i - c x_j`, or `None` when it does not divide.
    /// Synthetic division in `x_i` over the remaining variables.
    pub fn divide_linear(&self, i: usize, j: usize, c: &R::Elem) -> Option<Self> {
        assert!(i != j && i < self.nvars && j < self.nvars);
        let Some(deg_i) = self.terms.keys().map(|m| m.0[i]).max() else {
            return Some(self.clone());
        };
        // coefficient polynomials g_k (x_i-free), k = 0..=deg_i
        let mut g: Vec<MultiPoly<R>> = (0..=deg_i)
            .map(|_| MultiPoly::zero(self.ring.clone(), self.nvars))
            .collect();
        for (m, v) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            g[k].add_term(Monomial(e), v.clone());
        }
        let shift = MultiPoly::monomial(self.ring.clone(), Monomial::var(self.nvars, j).0, c.clone());
        // b_top = g_top, b_k = g_k + c x_j b_{k+1}; remainder is b_0.
        let mut b: Vec<MultiPoly<R>> = vec![MultiPoly::zero(self.ring.clone(), self.nvars); deg_i as usize + 1];
        b[deg_i as usize] = g[deg_i as usize].clone();
        for k in (0..deg_i as usize).rev() {
            b[k] = &g[k] + &(&shift * &b[k + 1]);
        }
        if !b[0].is_zero() {
            return None;
        }
        let mut q = MultiPoly::zero(self.ring.clone(), self.nvars);
        for (k, bk) in b.iter().enumerate().skip(1) {
            for (m, v) in &bk.terms {
                let mut e = m.0.clone();
                e[i] += k as u32 - 1;
                q.add_term(Monomial(e), v.clone());
            }
        }
        Some(q)
    }

    /// Exact quotient by `x_i - c` for a constant `c`, or `None`.
    pub fn divide_shift(&self, i: usize, c: &R::Elem) -> Option<Self> {
        assert!(i < self.nvars);
        let Some(deg_i) = self.terms.keys().map(|m| m.0[i]).max() else {
            return Some(self.clone());
        };
        let mut g: Vec<MultiPoly<R>> = (0..=deg_i)
            .map(|_| MultiPoly::zero(self.ring.clone(), self.nvars))
            .collect();
        for (m, v) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            g[k].add_term(Monomial(e), v.clone());
        }
        let mut b = vec![MultiPoly::zero(self.ring.clone(), self.nvars); deg_i as usize + 1];
        b[deg_i as usize] = g[deg_i as usize].clone();
        for k in (0..deg_i as usize).rev() {
            b[k] = &g[k] + &b[k + 1].scale(c);
        }
        if !b[0].is_zero() {
            return None;
        }
        let mut q = MultiPoly::zero(self.ring.clone(), self.nvars);
        for (k, bk) in b.iter().enumerate().skip(1) {
            for (m, v) in &bk.terms {
                let mut e = m.0.clone();
                e[i] += k as u32 - 1;
                q.add_term(Monomial(e), v.clone());
            }
        }
        Some(q)
    }

    /// `F(x_1 + c_1, ..., x_n + c_n)`.
    pub fn translate(&self, shifts: &[R::Elem]) -> Self {
        assert_eq!(shifts.len(), self.nvars);
        let lin: Vec<MultiPoly<R>> = (0..self.nvars)
            .map(|k| {
                &MultiPoly::var(self.ring.clone(), self.nvars, k)
                    + &MultiPoly::constant(self.ring.clone(), self.nvars, shifts[k].clone())
            })
            .collect();
        let mut out = MultiPoly::zero(self.ring.clone(), self.nvars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(self.ring.clone(), self.nvars, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &lin[k].pow(e as u64);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// `prod_{i<j} (x_i - x_j)^exponent`.
    pub fn diff_product(ring: R, nvars: usize, exponent: u32) -> Self {
        let mut acc = MultiPoly::one(ring.clone(), nvars);
        if exponent == 0 {
            return acc;
        }
        for t in Transposition::all(nvars) {
            let diff = &MultiPoly::var(ring.clone(), nvars, t.i) - &MultiPoly::var(ring.clone(), nvars, t.j);
            acc = &acc * &diff.pow(exponent as u64);
        }
        acc
    }

    /// Substitutes every variable by the same polynomial in one variable,
    /// returning coefficients of the resulting univariate polynomial.
    pub fn diagonal_coeffs(&self) -> Vec<R::Elem> {
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![self.ring.zero(); deg + 1];
        for (m, c) in &self.terms {
            let d = m.degree() as usize;
            out[d] = self.ring.add(&out[d], c);
        }
        while out.len() > 1 && self.ring.is_zero(out.last().unwrap()) {
            out.pop();
        }
        out
    }
}

impl<R: Ring> PartialEq for MultiPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<R: Ring> fmt::Debug for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// Canonical text: terms by descending total degree, then descending
/// lexicographic exponents; unit coefficients omitted before variables.
impl<R: Ring> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let repr = self.ring.coeff_repr(c);
            if repr.negative {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let has_vars = m.degree() > 0;
            if repr.compound {
                write!(f, "({})", repr.magnitude)?;
            } else if !has_vars || repr.magnitude != "1" {
                f.write_str(&repr.magnitude)?;
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl<R: Ring> Add for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn add(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<R: Ring> Sub for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn sub(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), self.ring.neg(c));
        }
        out
    }
}

impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.ring.neg(c)))
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        }
    }
}

impl<R: Ring> Mul for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn mul(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.ring.clone(), self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb));
            }
        }
        out
    }
}

/// Shorthand used throughout the tests: builds a polynomial over a ring from
/// integer coefficients.
pub fn poly_from_ints<R: Ring>(ring: R, nvars: usize, terms: &[(i64, &[u32])]) -> MultiPoly<R> {
    MultiPoly::from_terms(
        ring.clone(),
        nvars,
        terms
            .iter()
            .map(|(c, e)| (e.to_vec(), ring.from_bigint(&BigInt::from(*c)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};
    use alloc::string::ToString;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn qp(nvars: usize, terms: &[(i64, &[u32])]) -> MultiPoly<Rationals> {
        poly_from_ints(Rationals, nvars, terms)
    }

    fn t(i: usize, j: usize) -> Transposition {
        Transposition::new(i, j).unwrap()
    }

    #[test]
    fn transposition_examples() {
        let f = qp(2, &[(1, &[2, 1])]);
        assert_eq!(f.apply_transposition(t(0, 1)).unwrap(), qp(2, &[(1, &[1, 2])]));
        let g = qp(2, &[(1, &[1, 0]), (1, &[0, 1])]);
        assert_eq!(g.apply_transposition(t(0, 1)).unwrap(), g);
        let h = qp(3, &[(1, &[3, 0, 0]), (-1, &[0, 0, 1])]);
        assert_eq!(
            h.apply_transposition(t(0, 2)).unwrap(),
            qp(3, &[(1, &[0, 0, 3]), (-1, &[1, 0, 0])])
        );
    }

    #[test]
    fn transposition_index_checked() {
        let f = qp(2, &[(1, &[1, 0])]);
        assert_eq!(
            f.apply_transposition(t(0, 2)),
            Err(PolyError::IndexOutOfRange { index: 2, nvars: 2 })
        );
        assert!(Transposition::new(1, 1).is_err());
    }

    #[test]
    fn shift_division_and_translation() {
        let q = |n: i64| BigRational::from_integer(n.into());
        // (x1 - 2)(x1 + x2)
        let f = qp(2, &[(1, &[2, 0]), (1, &[1, 1]), (-2, &[1, 0]), (-2, &[0, 1])]);
        assert_eq!(f.divide_shift(0, &q(2)), Some(qp(2, &[(1, &[1, 0]), (1, &[0, 1])])));
        assert_eq!(f.divide_shift(0, &q(1)), None);
        // (x1 + 1)^2 = x1^2 + 2x1 + 1
        let g = qp(2, &[(1, &[2, 0])]).translate(&[q(1), q(0)]);
        assert_eq!(g, qp(2, &[(1, &[2, 0]), (2, &[1, 0]), (1, &[0, 0])]));
        let back = g.translate(&[q(-1), q(0)]);
        assert_eq!(back, qp(2, &[(1, &[2, 0])]));
    }

    #[test]
    fn remainder_examples() {
        let f = qp(2, &[(1, &[2, 0])]);
        assert_eq!(f.rem_pow_diff(t(0, 1), 1), qp(2, &[(1, &[0, 2])]));

        let diff = qp(2, &[(1, &[1, 0]), (-1, &[0, 1])]);
        let g = &diff.pow(3) * &qp(2, &[(1, &[0, 1])]);
        assert!(g.rem_pow_diff(t(0, 1), 3).is_zero());

        let h = qp(2, &[(1, &[3, 0]), (-1, &[0, 3])]);
        assert_eq!(
            h.rem_pow_diff(t(0, 1), 3),
            qp(2, &[(3, &[2, 1]), (-3, &[1, 2])])
        );
    }

    #[test]
    fn diff_product_examples() {
        assert_eq!(
            MultiPoly::diff_product(Rationals, 2, 1),
            qp(2, &[(1, &[1, 0]), (-1, &[0, 1])])
        );
        assert_eq!(MultiPoly::diff_product(Rationals, 3, 0), MultiPoly::one(Rationals, 3));
        let v2 = MultiPoly::diff_product(Rationals, 3, 2);
        assert_eq!(v2.total_degree(), Some(6));
        assert!(v2.is_homogeneous());
        assert_eq!(v2.num_terms(), brute_force_vandermonde_square_terms());
    }

    // Independent count: expand prod (x_i - x_j)^2 by enumerating the choice
    // of monomial from each of the six linear factors.
    fn brute_force_vandermonde_square_terms() -> usize {
        let pairs = [(0usize, 1usize), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)];
        let mut acc: BTreeMap<[u32; 3], i64> = BTreeMap::new();
        for mask in 0u32..64 {
            let mut e = [0u32; 3];
            let mut sign = 1i64;
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 0 {
                    e[i] += 1;
                } else {
                    e[j] += 1;
                    sign = -sign;
                }
            }
            *acc.entry(e).or_default() += sign;
        }
        acc.values().filter(|&&c| c != 0).count()
    }

    #[test]
    fn display_is_canonical() {
        let h = qp(3, &[(1, &[3, 0, 0]), (-1, &[0, 0, 1])]);
        assert_eq!(h.to_string(), "x1^3-x3");
        let g = qp(2, &[(3, &[2, 1]), (-3, &[1, 2]), (1, &[0, 0])]);
        assert_eq!(g.to_string(), "3x1^2x2-3x1x2^2+1");
        assert_eq!(MultiPoly::zero(Rationals, 2).to_string(), "0");
        let f7 = poly_from_ints(PrimeField::new(7).unwrap(), 2, &[(-1, &[1, 0])]);
        assert_eq!(f7.to_string(), "6x1");
    }

    #[test]
    fn characteristic_two_remainder_has_no_halves() {
        let f2 = PrimeField::new(2).unwrap();
        // (1-s)(x1^2 x2) = x1^2 x2 - x1 x2^2 = x1 x2 (x1 - x2)
        let f = poly_from_ints(f2, 2, &[(1, &[2, 1])]);
        let a = f.antisymmetrize(t(0, 1)).unwrap();
        assert!(a.rem_pow_diff(t(0, 1), 1).is_zero());
        assert!(!a.rem_pow_diff(t(0, 1), 2).is_zero());
    }

    #[test]
    fn divide_linear_exact_and_inexact() {
        // x1^2 - 4 x2^2 = (x1 - 2 x2)(x1 + 2 x2)
        let f = qp(2, &[(1, &[2, 0]), (-4, &[0, 2])]);
        let two = BigRational::from_integer(2.into());
        let q = f.divide_linear(0, 1, &two).unwrap();
        assert_eq!(q, qp(2, &[(1, &[1, 0]), (2, &[0, 1])]));
        assert!(f.divide_linear(0, 1, &BigRational::from_integer(3.into())).is_none());
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = MultiPoly<Rationals>> {
        proptest::collection::vec(
            (-4i64..5, proptest::collection::vec(0u32..4, nvars)),
            0..6,
        )
        .prop_map(move |terms| {
            MultiPoly::from_terms(
                Rationals,
                nvars,
                terms
                    .into_iter()
                    .map(|(c, e)| (e, BigRational::from_integer(c.into()))),
            )
        })
    }

    fn arb_poly_f3(nvars: usize) -> impl Strategy<Value = MultiPoly<PrimeField>> {
        arb_poly(nvars).prop_map(|p| {
            p.map_coeffs(PrimeField::new(3).unwrap(), |c| {
                use crate::exact::Field;
                PrimeField::new(3).unwrap().from_rational(c)
            })
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn transposition_is_involutive_homomorphism(a in arb_poly(3), b in arb_poly(3), i in 0usize..3, j in 0usize..3) {
            prop_assume!(i != j);
            let s = t(i, j);
            let sa = a.apply_transposition(s).unwrap();
            prop_assert_eq!(sa.apply_transposition(s).unwrap(), a.clone());
            prop_assert_eq!((&a * &b).apply_transposition(s).unwrap(), &sa * &b.apply_transposition(s).unwrap());
            prop_assert_eq!((&a + &b).apply_transposition(s).unwrap(), &sa + &b.apply_transposition(s).unwrap());
        }

        #[test]
        fn remainder_is_a_remainder(f in arb_poly(3), e in 1u32..5, i in 0usize..3, j in 0usize..3) {
            prop_assume!(i != j);
            let s = t(i, j);
            let r = f.rem_pow_diff(s, e);
            prop_assert!(r.terms().all(|(m, _)| m.exponents()[s.i()] < e));
            // F - r must vanish to order e: dividing e times by (x_i - x_j) succeeds.
            let one = BigRational::from_integer(1.into());
            let mut q = &f - &r;
            for _ in 0..e {
                q = q.divide_linear(s.i(), s.j(), &one).expect("divisible");
            }
        }

        #[test]
        fn remainder_f3_is_a_remainder(f in arb_poly_f3(3), e in 1u32..5) {
            let s = t(0, 2);
            let r = f.rem_pow_diff(s, e);
            let mut q = &f - &r;
            for _ in 0..e {
                q = q.divide_linear(0, 2, &1).expect("divisible");
            }
            prop_assert!(r.terms().all(|(m, _)| m.exponents()[0] < e));
        }

        // If (1-s)F vanishes to even order 2k, it vanishes to order 2k+1.
        #[test]
        fn odd_order_parity(f in arb_poly(2), k in 0u32..3, p in 0usize..3) {
            let s = t(0, 1);
            let diff = MultiPoly::diff_product(Rationals, 2, 2 * k);
            let g = &diff * &f;
            let a = g.antisymmetrize(s).unwrap();
            prop_assert!(a.rem_pow_diff(s, 2 * k).is_zero());
            prop_assert!(a.rem_pow_diff(s, 2 * k + 1).is_zero());
            let field = PrimeField::new([3u64, 5, 7][p]).unwrap();
            let ap = a.map_coeffs(field, |c| { use crate::exact::Field; field.from_rational(c) }).unwrap();
            prop_assert!(ap.rem_pow_diff(s, 2 * k + 1).is_zero());
        }
    }
}
