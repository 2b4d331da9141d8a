//! Twisted quasi-invariants `Q_m(f)`.
//!
//! A twist is a finite product `f(x) = prod (x - a_i)^(b_i)` with rational
//! roots and exponents that are rational or formal parameters. For two
//! variables the condition is that `f(x) F(x,y) - f(y) F(y,x)` vanishes to
//! order `2m+1` on the diagonal. It is tested exactly by putting
//! `x = S + T, y = S`, dividing out the unit `f(S)`, and reading off the
//! coefficients of `T^0 .. T^(2m)`, which are rational functions in `S`
//! with denominators supported on the roots.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::combinat::binomial;
use crate::exact::{binomial_param, format_rational, ParamPoly, ParamRing, Rationals, Ring};
use crate::linsolve::ExactMatrix;
use crate::multipoly::{Monomial, MultiPoly, Transposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("root {0} appears twice")]
    DuplicateRoot(String),
    #[error("exponent of (x-{0}) is zero")]
    ZeroExponent(String),
    #[error("exponent {0} is not an integer")]
    NonIntegerExponent(String),
    #[error("exponent {0} is formal; a rational value is required")]
    FormalExponent(String),
    #[error("integer exponent {z} with |z| < m = {m} is negative; no generator is known")]
    UnsupportedExponent { z: i64, m: u32 },
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("{0}")]
    NotMember(String),
    #[error("expected {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
}

/// One factor `(x - root)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistFactor {
    pub root: BigRational,
    pub exponent: ParamPoly,
}

/// `prod (x - a_i)^(b_i)` with pairwise distinct roots and nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwistSpec {
    factors: Vec<TwistFactor>,
}

impl TwistSpec {
    pub fn new(factors: Vec<TwistFactor>) -> Result<Self, TwistError> {
        for (k, f) in factors.iter().enumerate() {
            if f.exponent.is_zero() {
                return Err(TwistError::ZeroExponent(format_rational(&f.root)));
            }
            if factors[..k].iter().any(|g| g.root == f.root) {
                return Err(TwistError::DuplicateRoot(format_rational(&f.root)));
            }
        }
        Ok(TwistSpec { factors })
    }

    /// The untwisted case `f = 1`.
    pub fn empty() -> Self {
        TwistSpec::default()
    }

    /// `(x - root)^exponent` for rational data.
    pub fn single(root: BigRational, exponent: BigRational) -> Result<Self, TwistError> {
        TwistSpec::new(vec![TwistFactor {
            root,
            exponent: ParamPoly::constant(exponent),
        }])
    }

    /// Builds a twist from integer `(root, exponent)` pairs.
    pub fn from_ints(pairs: &[(i64, i64)]) -> Result<Self, TwistError> {
        TwistSpec::new(
            pairs
                .iter()
                .map(|&(a, b)| TwistFactor {
                    root: int(a),
                    exponent: ParamPoly::from_int(b),
                })
                .collect(),
        )
    }

    pub fn factors(&self) -> &[TwistFactor] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of twists; exponents at a shared root add, and cancelled
    /// factors are dropped.
    pub fn mul(&self, other: &TwistSpec) -> TwistSpec {
        let mut factors = self.factors.clone();
        for g in &other.factors {
            match factors.iter().position(|f| f.root == g.root) {
                Some(k) => {
                    let e = factors[k].exponent.add(&g.exponent);
                    if e.is_zero() {
                        factors.remove(k);
                    } else {
                        factors[k].exponent = e;
                    }
                }
                None => factors.push(g.clone()),
            }
        }
        TwistSpec { factors }
    }

    pub fn inverse(&self) -> TwistSpec {
        TwistSpec {
            factors: self
                .factors
                .iter()
                .map(|f| TwistFactor {
                    root: f.root.clone(),
                    exponent: f.exponent.neg(),
                })
                .collect(),
        }
    }

    /// Exponents as rationals, failing on formal ones.
    pub fn rational_exponents(&self) -> Result<Vec<BigRational>, TwistError> {
        self.factors
            .iter()
            .map(|f| {
                f.exponent
                    .constant_value()
                    .ok_or_else(|| TwistError::FormalExponent(f.exponent.to_string()))
            })
            .collect()
    }

    /// Exponents as integers, failing on formal or fractional ones.
    pub fn integer_exponents(&self) -> Result<Vec<i64>, TwistError> {
        self.rational_exponents()?
            .into_iter()
            .map(|b| {
                if b.is_integer() {
                    b.to_integer()
                        .to_i64()
                        .ok_or_else(|| TwistError::NonIntegerExponent(format_rational(&b)))
                } else {
                    Err(TwistError::NonIntegerExponent(format_rational(&b)))
                }
            })
            .collect()
    }
}

impl fmt::Display for TwistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            let exp = match fac.exponent.constant_value() {
                Some(c) => format_rational(&c),
                None => fac.exponent.to_string(),
            };
            write!(f, "(x-{})^{}", format_rational(&fac.root), exp)?;
        }
        Ok(())
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `d_m(z)`: `min(m, |z|)` for integer `z`, otherwise `m`.
pub fn d_value(m: u32, z: &ParamPoly) -> u32 {
    match z.constant_value() {
        Some(c) if c.is_integer() => {
            let a = c.to_integer().abs();
            if a < BigInt::from(m) {
                a.to_u32().expect("below m")
            } else {
                m
            }
        }
        _ => m,
    }
}

/// `d_m(f) = sum_i d_m(b_i)`.
pub fn d_twist(m: u32, f: &TwistSpec) -> u32 {
    f.factors.iter().map(|fac| d_value(m, &fac.exponent)).sum()
}

/// Closed-form Hilbert series of `Q_m(f)`, `n = 2`, as a numerator over
/// `(1-t)(1-t^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedSeries {
    pub m: u32,
    /// Numerator coefficients, like terms combined, trailing zeros trimmed.
    pub numerator: Vec<i64>,
}

impl TwistedSeries {
    /// Coefficients of the series in degrees `0..=d_max`.
    pub fn expand(&self, d_max: u32) -> Vec<i64> {
        let len = d_max as usize + 1;
        let mut a = vec![0i64; len];
        for (d, &c) in self.numerator.iter().enumerate().take(len) {
            a[d] = c;
        }
        // divide by (1 - t), then by (1 - t^2)
        for d in 1..len {
            a[d] += a[d - 1];
        }
        for d in 2..len {
            a[d] += a[d - 2];
        }
        a
    }
}

impl fmt::Display for TwistedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::hilbert::format_t_poly(&self.numerator))
    }
}

pub fn twisted_series(m: u32, f: &TwistSpec) -> TwistedSeries {
    let top = (2 * m + 1) as usize;
    let mut num = vec![0i64; top + 1];
    let mut add = |d: usize, c: i64| {
        if num.len() <= d {
            num.resize(d + 1, 0);
        }
        num[d] += c;
    };
    add(2 * m as usize, 1);
    add(top, 1);
    for i in 1..=m {
        let base = (2 * (m - i) + d_twist(i, f)) as usize;
        add(base, 1);
        add(base + 2, -1);
    }
    while num.len() > 1 && *num.last().unwrap() == 0 {
        num.pop();
    }
    TwistedSeries { m, numerator: num }
}

/// Taylor coefficient of `T^l` in `F(x_i = x_j + T)`; the result is free
/// of `x_i`.
fn taylor_coeff<R: Ring>(f: &MultiPoly<R>, i: usize, j: usize, l: u32) -> MultiPoly<R> {
    let ring = f.ring().clone();
    let mut out = MultiPoly::zero(ring.clone(), f.nvars());
    for (m, c) in f.terms() {
        let r = m.exponents()[i];
        if r < l {
            continue;
        }
        let mut e = m.exponents().to_vec();
        e[i] = 0;
        e[j] += r - l;
        out.add_term(Monomial::new(e), ring.mul(c, &ring.from_bigint(&binomial(r as u64, l as u64))));
    }
    out
}

fn param_constant(nvars: usize, c: ParamPoly) -> MultiPoly<ParamRing> {
    MultiPoly::constant(ParamRing, nvars, c)
}

/// `x_j - a` as a polynomial.
fn shifted_var(nvars: usize, j: usize, a: &BigRational) -> MultiPoly<ParamRing> {
    &MultiPoly::var(ParamRing, nvars, j) - &param_constant(nvars, ParamPoly::constant(a.clone()))
}

/// Unreduced numerators of the `T^k` coefficients, `k < order`, over the
/// common denominator `prod (S - a_i)^k` with `S = x_j`.
fn raw_numerators(
    f: &MultiPoly<ParamRing>,
    i: usize,
    j: usize,
    h: &TwistSpec,
    order: u32,
) -> Vec<MultiPoly<ParamRing>> {
    let n = f.nvars();
    let one = MultiPoly::one(ParamRing, n);
    let lin: Vec<MultiPoly<ParamRing>> = h.factors.iter().map(|fac| shifted_var(n, j, &fac.root)).collect();
    let q_all = lin.iter().fold(one.clone(), |acc, p| &acc * p);
    // series of prod_i (1 + T/(S-a_i))^(b_i); entry s has denominator Q^s
    let mut w: Vec<MultiPoly<ParamRing>> = vec![MultiPoly::zero(ParamRing, n); order as usize];
    w[0] = one.clone();
    for (k, fac) in h.factors.iter().enumerate() {
        let others = lin
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != k)
            .fold(one.clone(), |acc, (_, p)| &acc * p);
        let mut series = Vec::with_capacity(order as usize);
        let mut pow = one.clone();
        for s in 0..order {
            series.push(&param_constant(n, binomial_param(&fac.exponent, s)) * &pow);
            pow = &pow * &others;
        }
        let mut next = vec![MultiPoly::zero(ParamRing, n); order as usize];
        for (a, wa) in w.iter().enumerate() {
            if wa.is_zero() {
                continue;
            }
            for (b, sb) in series.iter().enumerate().take(order as usize - a) {
                next[a + b] = &next[a + b] + &(wa * sb);
            }
        }
        w = next;
    }
    let swapped = f
        .apply_transposition(Transposition::new(i, j).expect("distinct indices"))
        .expect("indices in range");
    let fl: Vec<_> = (0..order).map(|l| taylor_coeff(f, i, j, l)).collect();
    let gl: Vec<_> = (0..order).map(|l| taylor_coeff(&swapped, i, j, l)).collect();
    let mut q_pows = vec![one.clone()];
    for _ in 1..order {
        let last = q_pows.last().unwrap().clone();
        q_pows.push(&last * &q_all);
    }
    (0..order as usize)
        .map(|k| {
            let mut acc = -&(&q_pows[k] * &gl[k]);
            for l in 0..=k {
                acc = &acc + &(&(&w[k - l] * &q_pows[l]) * &fl[l]);
            }
            acc
        })
        .collect()
}

/// Coefficient of `T^k`: `numerator / prod (S - root)^exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoeff {
    pub numerator: MultiPoly<ParamRing>,
    pub denominator: Vec<(BigRational, u32)>,
}

impl ExpansionCoeff {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// Diagonal expansion of `(1 - s_ij)(f F)` after removing the unit `f(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalExpansion {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<ExpansionCoeff>,
}

impl DiagonalExpansion {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// All computed coefficients vanish.
    pub fn vanishes(&self) -> bool {
        self.coeffs.iter().all(ExpansionCoeff::is_zero)
    }
}

impl fmt::Display for DiagonalExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str("\n")?;
            }
            write!(f, "T^{k}: ({})", c.numerator)?;
            let den: Vec<String> = c
                .denominator
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(a, e)| {
                    let base = if a.is_zero() {
                        alloc::format!("x{}", self.j + 1)
                    } else if a.is_negative() {
                        alloc::format!("(x{}+{})", self.j + 1, format_rational(&-a))
                    } else {
                        alloc::format!("(x{}-{})", self.j + 1, format_rational(a))
                    };
                    if *e == 1 {
                        base
                    } else {
                        alloc::format!("{base}^{e}")
                    }
                })
                .collect();
            if !den.is_empty() {
                write!(f, "/{}", den.join(""))?;
            }
        }
        Ok(())
    }
}

fn reduce(num: MultiPoly<ParamRing>, h: &TwistSpec, k: u32, j: usize) -> ExpansionCoeff {
    let mut num = num;
    let mut denominator = Vec::new();
    for fac in &h.factors {
        let a = ParamPoly::constant(fac.root.clone());
        let mut e = if num.is_zero() { 0 } else { k };
        while e > 0 {
            match num.divide_shift(j, &a) {
                Some(q) => {
                    num = q;
                    e -= 1;
                }
                None => break,
            }
        }
        denominator.push((fac.root.clone(), e));
    }
    ExpansionCoeff {
        numerator: num,
        denominator,
    }
}

/// Expansion along `x_i = x_j` for the relative twist `h = f_i / f_j`.
pub fn pair_expansion(
    f: &MultiPoly<ParamRing>,
    i: usize,
    j: usize,
    h: &TwistSpec,
    order: u32,
) -> DiagonalExpansion {
    assert!(i != j && i < f.nvars() && j < f.nvars());
    let coeffs = raw_numerators(f, i, j, h, order)
        .into_iter()
        .enumerate()
        .map(|(k, num)| reduce(num, h, k as u32, j))
        .collect();
    DiagonalExpansion { i, j, coeffs }
}

/// Expansion of `f(x)F(x,y) - f(y)F(y,x)` at `x = S + T, y = S`.
pub fn diagonal_expand(f: &MultiPoly<ParamRing>, twist: &TwistSpec, order: u32) -> Result<DiagonalExpansion, TwistError> {
    check_two(f.nvars())?;
    Ok(pair_expansion(f, 0, 1, twist, order))
}

fn check_two(nvars: usize) -> Result<(), TwistError> {
    if nvars == 2 {
        Ok(())
    } else {
        Err(TwistError::VariableCount { expected: 2, got: nvars })
    }
}

/// Rational polynomial viewed over the parameter ring.
pub fn to_param(f: &MultiPoly<Rationals>) -> MultiPoly<ParamRing> {
    f.map_coeffs(ParamRing, |c| Ok::<_, ()>(ParamPoly::constant(c.clone())))
        .expect("infallible")
}

/// `F` in `Q_m(f)` for two variables.
pub fn is_twisted_member(f: &MultiPoly<ParamRing>, m: u32, twist: &TwistSpec) -> Result<bool, TwistError> {
    Ok(diagonal_expand(f, twist, 2 * m + 1)?.vanishes())
}

/// `F` in `Q_m(f_1, ..., f_n)` with one twist per variable.
pub fn is_twisted_member_multi(
    f: &MultiPoly<ParamRing>,
    m: u32,
    twists: &[TwistSpec],
) -> Result<bool, TwistError> {
    if twists.len() != f.nvars() {
        return Err(TwistError::VariableCount {
            expected: f.nvars(),
            got: twists.len(),
        });
    }
    for t in Transposition::all(f.nvars()) {
        let h = twists[t.i()].mul(&twists[t.j()].inverse());
        if !pair_expansion(f, t.i(), t.j(), &h, 2 * m + 1).vanishes() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits exponents into the polynomial parts `N(x)` and `D(x)` with
/// `f = N / D`.
fn integral_parts(twist: &TwistSpec) -> Result<(MultiPoly<Rationals>, MultiPoly<Rationals>), TwistError> {
    let exps = twist.integer_exponents()?;
    let mut num = MultiPoly::one(Rationals, 1);
    let mut den = MultiPoly::one(Rationals, 1);
    for (fac, &b) in twist.factors.iter().zip(&exps) {
        let lin = &MultiPoly::var(Rationals, 1, 0) - &MultiPoly::constant(Rationals, 1, fac.root.clone());
        let p = lin.pow(b.unsigned_abs());
        if b > 0 {
            num = &num * &p;
        } else {
            den = &den * &p;
        }
    }
    Ok((num, den))
}

/// Embeds a polynomial in `x` as one in variable `k` of two.
fn embed(p: &MultiPoly<Rationals>, k: usize) -> MultiPoly<Rationals> {
    let mut out = MultiPoly::zero(Rationals, 2);
    for (m, c) in p.terms() {
        let mut e = vec![0, 0];
        e[k] = m.exponents()[0];
        out.add_term(Monomial::new(e), c.clone());
    }
    out
}

/// Monomials of degree at most `d`.
fn filtered_monomials(d: u32) -> Vec<MultiPoly<Rationals>> {
    (0..=d)
        .rev()
        .flat_map(|e| (0..=e).rev().map(move |a| (a, e - a)))
        .map(|(a, b)| MultiPoly::monomial(Rationals, vec![a, b], Rationals.one()))
        .collect()
}

/// Kernel of the linear map sending `filtered_monomials(d)` to `images`.
fn kernel_basis(images: Vec<MultiPoly<Rationals>>, d: u32) -> Vec<MultiPoly<Rationals>> {
    let mut keys: Vec<Monomial> = images.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    keys.sort();
    keys.dedup();
    let cols = images.len();
    let rows: Vec<Vec<BigRational>> = keys
        .iter()
        .map(|k| images.iter().map(|p| p.coeff(k.exponents())).collect())
        .collect();
    let basis = filtered_monomials(d);
    let null = if rows.is_empty() {
        (0..cols)
            .map(|c| (0..cols).map(|r| if r == c { BigRational::one() } else { BigRational::zero() }).collect())
            .collect()
    } else {
        ExactMatrix::from_rows(Rationals, cols, rows).nullspace()
    };
    null.into_iter()
        .map(|v: Vec<BigRational>| {
            basis
                .iter()
                .zip(&v)
                .fold(MultiPoly::zero(Rationals, 2), |acc, (b, c)| &acc + &b.scale(c))
        })
        .collect()
}

/// Basis of the members of `Q_m(f)` of degree at most `d`, for integer
/// exponents, from `(x-y)^(2m+1) | N(x)D(y)F(x,y) - N(y)D(x)F(y,x)`.
///
/// A twist with a nonzero root is not homogeneous, so `Q_m(f)` is only
/// filtered by degree; dimensions refer to the associated graded space.
pub fn twisted_basis_upto(m: u32, d: u32, twist: &TwistSpec) -> Result<Vec<MultiPoly<Rationals>>, TwistError> {
    let (num, den) = integral_parts(twist)?;
    let weight = &embed(&num, 0) * &embed(&den, 1);
    let t = Transposition::new(0, 1).expect("distinct");
    let images = filtered_monomials(d)
        .into_iter()
        .map(|mono| {
            let g = &weight * &mono;
            g.antisymmetrize(t).expect("two variables").rem_pow_diff(t, 2 * m + 1)
        })
        .collect();
    Ok(kernel_basis(images, d))
}

/// `dim F_d - dim F_(d-1)` for the degree filtration `F_d` of `Q_m(f)`.
pub fn twisted_dimension(m: u32, d: u32, twist: &TwistSpec) -> Result<usize, TwistError> {
    let below = if d == 0 { 0 } else { twisted_basis_upto(m, d - 1, twist)?.len() };
    Ok(twisted_basis_upto(m, d, twist)?.len() - below)
}

/// Same space for any rational exponents, from the diagonal expansion.
pub fn twisted_basis_upto_by_expansion(
    m: u32,
    d: u32,
    twist: &TwistSpec,
) -> Result<Vec<MultiPoly<Rationals>>, TwistError> {
    twist.rational_exponents()?;
    let order = 2 * m + 1;
    let images = filtered_monomials(d)
        .into_iter()
        .map(|mono| {
            let raw = raw_numerators(&to_param(&mono), 0, 1, twist, order);
            // stack the T^k numerators into one polynomial, tagging k in x1
            let mut out = MultiPoly::zero(Rationals, 2);
            for (k, p) in raw.iter().enumerate() {
                for (mon, c) in p.terms() {
                    let e = vec![k as u32, mon.exponents()[1]];
                    let c = c.constant_value().expect("rational exponents");
                    out.add_term(Monomial::new(e), c);
                }
            }
            out
        })
        .collect();
    Ok(kernel_basis(images, d))
}

pub fn twisted_dimension_by_expansion(m: u32, d: u32, twist: &TwistSpec) -> Result<usize, TwistError> {
    let below = if d == 0 {
        0
    } else {
        twisted_basis_upto_by_expansion(m, d - 1, twist)?.len()
    };
    Ok(twisted_basis_upto_by_expansion(m, d, twist)?.len() - below)
}

/// Slice dimensions for degrees `0..=d_max`, choosing the polynomial route
/// for integer exponents.
pub fn twisted_dims(m: u32, d_max: u32, twist: &TwistSpec) -> Result<Vec<usize>, TwistError> {
    let integral = twist.integer_exponents().is_ok();
    (0..=d_max)
        .map(|d| {
            if integral {
                twisted_dimension(m, d, twist)
            } else {
                twisted_dimension_by_expansion(m, d, twist)
            }
        })
        .collect()
}

/// The generator `P_m` for `f = x^z`: `y^z` when `z` is an integer with
/// `0 <= z < m`, otherwise
/// `sum_i C(m-z, i) C(m+z, m-i) x^i y^(m-i) / C(2m, m)`.
pub fn generator_pm(m: u32, z: &ParamPoly) -> Result<MultiPoly<ParamRing>, TwistError> {
    if let Some(c) = z.constant_value() {
        if c.is_integer() && c.abs() < int(m as i64) {
            let v = c.to_integer().to_i64().expect("below m");
            if v < 0 {
                return Err(TwistError::UnsupportedExponent { z: v, m });
            }
            return Ok(MultiPoly::monomial(ParamRing, vec![0, v as u32], ParamPoly::one()));
        }
    }
    let mz = ParamPoly::from_int(m as i64).sub(z);
    let pz = ParamPoly::from_int(m as i64).add(z);
    let central = BigRational::new(BigInt::one(), binomial(2 * m as u64, m as u64));
    let mut out = MultiPoly::zero(ParamRing, 2);
    for i in 0..=m {
        let c = binomial_param(&mz, i).mul(&binomial_param(&pz, m - i)).scale(&central);
        out.add_term(Monomial::new(vec![i, m - i]), c);
    }
    Ok(out)
}

/// Product of the shifted generators of each factor; its diagonal is
/// `prod (x - a_i)^(d_m(b_i))`.
pub fn twist_generator(m: u32, twist: &TwistSpec) -> Result<MultiPoly<ParamRing>, TwistError> {
    let mut acc = MultiPoly::one(ParamRing, 2);
    for fac in &twist.factors {
        let p = generator_pm(m, &fac.exponent)?;
        let shift = ParamPoly::constant(-fac.root.clone());
        acc = &acc * &p.translate(&[shift.clone(), shift]);
    }
    Ok(acc)
}

/// Univariate quotient by `(x - a)` over the parameter ring, ascending
/// coefficients.
fn divide_univariate(c: &[ParamPoly], a: &BigRational) -> Option<Vec<ParamPoly>> {
    if c.iter().all(ParamPoly::is_zero) {
        return Some(c.to_vec());
    }
    let n = c.len();
    let mut b = vec![ParamPoly::zero(); n];
    b[n - 1] = c[n - 1].clone();
    for k in (0..n - 1).rev() {
        b[k] = c[k].add(&b[k + 1].scale(a));
    }
    if !b[0].is_zero() {
        return None;
    }
    Some(b[1..].to_vec())
}

/// `prod (x - a_i)^(d_m(b_i))` divides `F(x, x)`.
pub fn diagonal_divisibility_check(f: &MultiPoly<ParamRing>, m: u32, twist: &TwistSpec) -> bool {
    let diag = f.diagonal_coeffs();
    for fac in &twist.factors {
        let mut c = diag.clone();
        for _ in 0..d_value(m, &fac.exponent) {
            match divide_univariate(&c, &fac.root) {
                Some(q) => c = q,
                None => return false,
            }
        }
    }
    true
}

/// Checks that `FG` lies in `Q_m(fg)` given `F` in `Q_m(f)`, `G` in `Q_m(g)`.
pub fn product_closure_check(
    f: &MultiPoly<ParamRing>,
    g: &MultiPoly<ParamRing>,
    m: u32,
    tf: &TwistSpec,
    tg: &TwistSpec,
) -> Result<bool, TwistError> {
    if !is_twisted_member(f, m, tf)? {
        return Err(TwistError::NotMember(alloc::format!("first factor is not in Q_{m}({tf})")));
    }
    if !is_twisted_member(g, m, tg)? {
        return Err(TwistError::NotMember(alloc::format!("second factor is not in Q_{m}({tg})")));
    }
    is_twisted_member(&(f * g), m, &tf.mul(tg))
}

/// For `F` in `Q_m(f)` with `F(x,x) = 0` and `m >= 1`: `(x-y)^2 | F` and
/// the quotient lies in `Q_{m-1}(f)`.
pub fn squares_lemma_check(f: &MultiPoly<ParamRing>, m: u32, twist: &TwistSpec) -> Result<bool, TwistError> {
    if m == 0 || !is_twisted_member(f, m, twist)? || !f.diagonal_coeffs().iter().all(ParamPoly::is_zero) {
        return Err(TwistError::NotMember(alloc::format!(
            "expected a member of Q_{m}({twist}) with m >= 1 vanishing on the diagonal"
        )));
    }
    let one = ParamPoly::one();
    let Some(q) = f.divide_linear(0, 1, &one).and_then(|q| q.divide_linear(0, 1, &one)) else {
        return Ok(false);
    };
    is_twisted_member(&q, m - 1, twist)
}

/// Membership in the q-deformed space with a monomial twist
/// `x_1^(a_1) ... x_n^(a_n)`: for every pair, `(1 - s_ij)(x^a F)` is
/// divisible by `prod_{k=-m}^{m} (x_i - q^k x_j)` once monomial
/// denominators are cleared.
pub fn q_membership(
    f: &MultiPoly<Rationals>,
    m: u32,
    q: &BigRational,
    twist: Option<&[i64]>,
) -> Result<bool, TwistError> {
    if q.is_zero() {
        return Err(TwistError::ZeroQ);
    }
    let n = f.nvars();
    let zeros = vec![0i64; n];
    let a = twist.unwrap_or(&zeros);
    if a.len() != n {
        return Err(TwistError::VariableCount { expected: n, got: a.len() });
    }
    for t in Transposition::all(n) {
        let (i, j) = (t.i(), t.j());
        let mut shift: Vec<i64> = a.iter().map(|&v| (-v).max(0)).collect();
        let pair = shift[i].max(shift[j]);
        shift[i] = pair;
        shift[j] = pair;
        let exps: Vec<u32> = a.iter().zip(&shift).map(|(&v, &c)| (v + c) as u32).collect();
        let h = &MultiPoly::monomial(Rationals, exps, BigRational::one()) * f;
        let mut rest = h.antisymmetrize(t).expect("index in range");
        let mut factors = vec![BigRational::one()];
        let mut qk = BigRational::one();
        for _ in 1..=m {
            qk *= q;
            factors.push(qk.clone());
            factors.push(qk.recip());
        }
        for c in &factors {
            match rest.divide_linear(i, j, c) {
                Some(r) => rest = r,
                None => return Ok(false),
            }
        }
    }
    Ok(true)
}
