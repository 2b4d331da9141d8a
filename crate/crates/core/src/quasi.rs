//! Quasi-invariant polynomials: membership, degree slices and the lowest
//! non-symmetric degree.
//!
//! A slice `Q_{m,d}(n)` splits as the symmetric polynomials of degree `d`
//! plus the quasi-invariants supported on non-sorted monomials, because a
//! quasi-invariant minus its symmetric part (read off from the coefficients
//! of sorted monomials) is again quasi-invariant. Only the second summand
//! needs linear algebra.
//!
//! Constraints come from expanding `F - s_ij F` around `x_i = x_j`: for a
//! block of monomials `x_i^r x_j^(K-r) x^beta` the coefficient of
//! `(x_i - x_j)^k` is `sum_r a_r (C(r,k) - C(K-r,k))`. These integer
//! functionals, for `k < 2m+1`, cut out the slice over every field.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::combinat::{binomial_i128, monomials_of_degree, partition_count, partitions};
use crate::exact::{Field, PrimeField, Rationals};
use crate::linsolve::{
    gauss_jordan, independent_rows, lifting_primes, Eliminate, IntMatrix, FAST_MODULUS_LIMIT,
};
use crate::multipoly::{Monomial, MultiPoly, Transposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasiError {
    #[error("no non-symmetric quasi-invariant up to degree {0}")]
    NotFound(u32),
    #[error("could not certify the rational dimension: {0}")]
    CertificationFailed(String),
}

/// `F - s F` vanishes to order `2m+1` along every diagonal `x_i = x_j`.
pub fn is_quasi_invariant<R: crate::exact::Ring>(f: &MultiPoly<R>, m: u32) -> bool {
    Transposition::all(f.nvars()).all(|t| {
        f.antisymmetrize(t)
            .expect("index in range")
            .rem_pow_diff(t, 2 * m + 1)
            .is_zero()
    })
}

/// Monomial symmetric polynomial `m_lambda` in `n` variables.
pub fn monomial_symmetric<F: Field>(field: &F, lambda: &[u32], n: usize) -> MultiPoly<F> {
    let mut exps: Vec<u32> = lambda.to_vec();
    exps.resize(n, 0);
    exps.sort_unstable();
    let mut out = MultiPoly::zero(field.clone(), n);
    loop {
        out.add_term(Monomial::new(exps.clone()), field.one());
        if !next_permutation(&mut exps) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Column layout of a degree slice: the non-sorted monomials, which carry
/// the non-symmetric part.
#[derive(Debug, Clone)]
pub struct SliceLayout {
    pub n: usize,
    pub d: u32,
    pub columns: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl SliceLayout {
    pub fn new(n: usize, d: u32) -> Self {
        let columns: Vec<Vec<u32>> = monomials_of_degree(d, n)
            .into_iter()
            .filter(|e| !e.windows(2).all(|w| w[0] >= w[1]))
            .collect();
        let index = columns.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        SliceLayout { n, d, columns, index }
    }

    pub fn column_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn to_poly<F: Field>(&self, field: &F, v: &[F::Elem]) -> MultiPoly<F> {
        MultiPoly::from_terms(
            field.clone(),
            self.n,
            self.columns.iter().cloned().zip(v.iter().cloned()),
        )
    }
}

/// Rows `k = 1..2m` of the block functional for `x_i^r x_j^(K-r)`,
/// indexed by `r = 0..=K`.
pub fn block_functionals(m: u32, big_k: u32) -> Vec<Vec<i128>> {
    (1..=2 * m as u64)
        .map(|k| {
            (0..=big_k as u64)
                .map(|r| binomial_i128(r, k) - binomial_i128(big_k as u64 - r, k))
                .collect()
        })
        .collect()
}

/// Fields over which slices can be computed.
pub trait QuasiField: Eliminate {
    /// A subset of the block functionals with the same span over this field.
    fn select_block_rows(&self, m: u32, big_k: u32) -> Vec<Vec<i128>> {
        let rows = block_functionals(m, big_k);
        let images: Vec<Vec<Self::Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| self.from_bigint(&BigInt::from(x))).collect())
            .collect();
        independent_rows(self, &images)
            .into_iter()
            .map(|i| rows[i].clone())
            .collect()
    }

    /// Nullity of the integer system read in this field.
    fn kernel_dim(&self, sys: &IntMatrix) -> usize {
        sys.cols() - self.echelon(self.dense(sys), sys.cols()).rank()
    }

    fn kernel_basis(&self, sys: &IntMatrix) -> Vec<Vec<Self::Elem>> {
        self.echelon(self.dense(sys), sys.cols()).nullspace(self)
    }

    /// Some nonzero kernel vector, if the kernel is nontrivial.
    fn kernel_vector(&self, sys: &IntMatrix) -> Option<Vec<Self::Elem>> {
        self.kernel_basis(sys).into_iter().next()
    }

    fn dense(&self, sys: &IntMatrix) -> Vec<Vec<Self::Elem>> {
        sys.rows()
            .iter()
            .map(|row| {
                let mut d = vec![self.zero(); sys.cols()];
                for &(c, v) in row {
                    d[c] = self.from_bigint(&BigInt::from(v));
                }
                d
            })
            .collect()
    }

    /// `dim Q_{m,d}(n)` for `d = 0..=d_max`.
    fn series_dims(&self, n: usize, m: u32, d_max: u32) -> Result<Vec<u64>, QuasiError> {
        Ok((0..=d_max)
            .map(|d| slice_dim(self, n, m, d) as u64)
            .collect())
    }
}

impl QuasiField for PrimeField {
    fn kernel_dim(&self, sys: &IntMatrix) -> usize {
        let p = self.modulus();
        if p < FAST_MODULUS_LIMIT {
            sys.cols() - sys.rank_mod(p as u32)
        } else {
            sys.cols() - gauss_jordan(self, self.dense(sys), sys.cols()).rank()
        }
    }
}

/// Largest lifting prime; the modular image used for rational upper bounds.
fn reference_prime() -> u32 {
    lifting_primes().next().expect("prime")
}

const MAX_LIFT_PRIMES: usize = 48;

impl QuasiField for Rationals {
    // The nullity mod p bounds the rational nullity from above; lifted and
    // verified vectors bound it from below.
    fn kernel_dim(&self, sys: &IntMatrix) -> usize {
        let upper = sys.cols() - sys.rank_mod(reference_prime());
        if upper == 0 {
            return 0;
        }
        match sys.lift_kernel(None, MAX_LIFT_PRIMES) {
            Ok(k) => k.vectors.len(),
            Err(_) => sys.cols() - self.echelon(self.dense(sys), sys.cols()).rank(),
        }
    }

    fn kernel_basis(&self, sys: &IntMatrix) -> Vec<Vec<BigRational>> {
        if sys.cols() == sys.rank_mod(reference_prime()) {
            return Vec::new();
        }
        match sys.lift_kernel(None, MAX_LIFT_PRIMES) {
            Ok(k) => k
                .vectors
                .into_iter()
                .map(|(_, v)| v.into_iter().map(BigRational::from_integer).collect())
                .collect(),
            Err(_) => self.echelon(self.dense(sys), sys.cols()).nullspace(self),
        }
    }

    fn kernel_vector(&self, sys: &IntMatrix) -> Option<Vec<BigRational>> {
        let ech = sys.echelon_mod(reference_prime(), false);
        if ech.rank() == sys.cols() {
            return None;
        }
        let free = crate::linsolve::Echelon::<u32> {
            rows: Vec::new(),
            pivots: ech.pivots,
            cols: sys.cols(),
        }
        .free_columns();
        match sys.lift_kernel(Some(&free[..1]), MAX_LIFT_PRIMES) {
            Ok(k) => k
                .vectors
                .into_iter()
                .next()
                .map(|(_, v)| v.into_iter().map(BigRational::from_integer).collect()),
            Err(_) => self.kernel_basis(sys).into_iter().next(),
        }
    }

    fn series_dims(&self, n: usize, m: u32, d_max: u32) -> Result<Vec<u64>, QuasiError> {
        certified_series_q(n, m, d_max).map(|c| c.dims)
    }
}

/// Integer constraint system for the non-symmetric part of `Q_{m,d}(n)`,
/// with block rows chosen independent over `field`.
pub fn restricted_system<F: QuasiField>(field: &F, n: usize, m: u32, d: u32) -> (SliceLayout, IntMatrix) {
    let layout = SliceLayout::new(n, d);
    let mut sys = IntMatrix::new(layout.columns.len());
    if m == 0 || n < 2 {
        return (layout, sys);
    }
    let mut selected: BTreeMap<u32, Vec<Vec<i128>>> = BTreeMap::new();
    for t in Transposition::all(n) {
        for big_k in 0..=d {
            let rows = selected
                .entry(big_k)
                .or_insert_with(|| field.select_block_rows(m, big_k));
            if rows.is_empty() {
                continue;
            }
            for beta in monomials_of_degree(d - big_k, n - 2) {
                let mut exps = vec![0u32; n];
                let mut it = beta.iter();
                for (v, e) in exps.iter_mut().enumerate() {
                    if v != t.i() && v != t.j() {
                        *e = *it.next().expect("beta entry");
                    }
                }
                // local column of x_i^r x_j^(K-r) x^beta, None for sorted monomials
                let cols: Vec<Option<usize>> = (0..=big_k)
                    .map(|r| {
                        exps[t.i()] = r;
                        exps[t.j()] = big_k - r;
                        layout.column_of(&exps)
                    })
                    .collect();
                for row in rows.iter() {
                    let entries = row
                        .iter()
                        .zip(&cols)
                        .filter_map(|(&v, c)| c.map(|c| (c, v)))
                        .collect();
                    sys.push_row(entries);
                }
            }
        }
    }
    (layout, sys)
}

/// A degree slice with an explicit basis.
#[derive(Debug, Clone)]
pub struct QuasiSpaceSlice<F: Field> {
    pub n: usize,
    pub m: u32,
    pub d: u32,
    pub field: F,
    /// Monomial symmetric functions first, then non-symmetric elements
    /// supported on non-sorted monomials.
    pub basis: Vec<MultiPoly<F>>,
}

impl<F: Field> QuasiSpaceSlice<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn symmetric_count(&self) -> usize {
        partition_count(self.d as usize, self.n) as usize
    }
}

pub fn slice_basis<F: QuasiField>(field: &F, n: usize, m: u32, d: u32) -> QuasiSpaceSlice<F> {
    let mut basis: Vec<MultiPoly<F>> = partitions(d, n)
        .iter()
        .map(|l| monomial_symmetric(field, l, n))
        .collect();
    if d > 2 * m || m == 0 {
        let (layout, sys) = restricted_system(field, n, m, d);
        basis.extend(field.kernel_basis(&sys).iter().map(|v| layout.to_poly(field, v)));
    }
    QuasiSpaceSlice {
        n,
        m,
        d,
        field: field.clone(),
        basis,
    }
}

/// `dim Q_{m,d}(n)` without building the basis.
pub fn slice_dim<F: QuasiField>(field: &F, n: usize, m: u32, d: u32) -> usize {
    let sym = partition_count(d as usize, n) as usize;
    // Below degree 2m+1 the difference F - sF would be divisible by a
    // polynomial of larger degree, so the slice is symmetric.
    if m > 0 && d < 2 * m + 1 {
        return sym;
    }
    let (_, sys) = restricted_system(field, n, m, d);
    sym + field.kernel_dim(&sys)
}

/// Smallest degree `d <= d_cap` with a non-symmetric element, and one such
/// element.
pub fn lowest_nonsymmetric<F: QuasiField>(
    field: &F,
    n: usize,
    m: u32,
    d_cap: u32,
) -> Result<(u32, MultiPoly<F>), QuasiError> {
    let start = (2 * m + 1).max(1);
    for d in start..=d_cap {
        let (layout, sys) = restricted_system(field, n, m, d);
        if let Some(v) = field.kernel_vector(&sys) {
            let f = layout.to_poly(field, &v);
            debug_assert!(!f.is_symmetric());
            return Ok((d, f));
        }
    }
    Err(QuasiError::NotFound(d_cap))
}

/// Default scan cap `mn + 1`, where a non-symmetric element exists in
/// characteristic zero.
pub fn default_cap(n: usize, m: u32) -> u32 {
    m * n as u32 + 1
}

/// Rational Hilbert series prefix together with the integer generators
/// that certify it.
#[derive(Debug, Clone)]
pub struct CertifiedSeries {
    pub dims: Vec<u64>,
    /// Integer quasi-invariants, independent over the symmetric
    /// polynomials; the constant 1 comes first.
    pub generators: Vec<MultiPoly<Rationals>>,
}

/// `dim Q_{m,d}(n)` over `Q` for `d <= d_max`, certified from both sides.
///
/// Upper bound: the nullity modulo a prime never falls below the rational
/// nullity. Lower bound: integer quasi-invariants `g_1, ..., g_r` whose
/// matrix `[g_j(sigma x0)]` over all permutations `sigma` has full column
/// rank modulo that prime are independent over the symmetric polynomials,
/// so `dim Q_d >= sum_j #{partitions of d - deg g_j into parts <= n}`.
/// Whenever the bounds differ, new generators are lifted from the modular
/// kernel until they meet.
pub fn certified_series_q(n: usize, m: u32, d_max: u32) -> Result<CertifiedSeries, QuasiError> {
    let p = reference_prime();
    let pm = p as u64;
    let points = permuted_points(n, pm);
    let mut eval_basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut gen_degrees: Vec<u32> = Vec::new();
    let mut generators = Vec::new();
    let one = MultiPoly::one(Rationals, n);
    let ev = eval_poly_q(&one, &points, pm);
    assert!(try_extend(&mut eval_basis, ev, pm));
    gen_degrees.push(0);
    generators.push(one);

    let mut dims = Vec::with_capacity(d_max as usize + 1);
    for d in 0..=d_max {
        let sym = partition_count(d as usize, n);
        let lower: u64 = gen_degrees
            .iter()
            .filter(|&&g| g <= d)
            .map(|&g| partition_count((d - g) as usize, n))
            .sum();
        if m > 0 && d < 2 * m + 1 {
            if lower != sym {
                return Err(QuasiError::CertificationFailed(alloc::format!(
                    "degree {d}: generators exceed the symmetric count"
                )));
            }
            dims.push(sym);
            continue;
        }
        let (layout, sys) = restricted_system(&Rationals, n, m, d);
        let ech = sys.echelon_mod(p, false);
        let upper = sym + (sys.cols() - ech.rank()) as u64;
        if lower > upper {
            return Err(QuasiError::CertificationFailed(alloc::format!(
                "degree {d}: lower bound {lower} above modular bound {upper}"
            )));
        }
        if lower < upper {
            let need = (upper - lower) as usize;
            let red = sys.echelon_mod(p, true);
            let free = crate::linsolve::Echelon::<u32> {
                rows: Vec::new(),
                pivots: red.pivots.clone(),
                cols: sys.cols(),
            }
            .free_columns();
            let col_vals: Vec<Vec<u64>> = points
                .iter()
                .map(|pt| layout.columns.iter().map(|e| eval_monomial(e, pt, pm)).collect())
                .collect();
            let mut trial = eval_basis.clone();
            let mut picked = Vec::new();
            for &f in &free {
                // modular kernel vector for f: 1 at f, minus the echelon column at pivots
                let ev: Vec<u64> = col_vals
                    .iter()
                    .map(|vals| {
                        let mut acc = vals[f];
                        for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                            acc = (acc + (pm - row[f] as u64) * vals[pc]) % pm;
                        }
                        acc
                    })
                    .collect();
                if try_extend(&mut trial, ev, pm) {
                    picked.push(f);
                    if picked.len() == need {
                        break;
                    }
                }
            }
            if picked.len() < need {
                return Err(QuasiError::CertificationFailed(alloc::format!(
                    "degree {d}: only {} of {need} new independent generators found",
                    picked.len()
                )));
            }
            let lifted = sys
                .lift_kernel(Some(&picked), MAX_LIFT_PRIMES)
                .map_err(|e| QuasiError::CertificationFailed(alloc::format!("degree {d}: {e}")))?;
            for (_, v) in lifted.vectors {
                let coeffs: Vec<BigRational> = v.into_iter().map(BigRational::from_integer).collect();
                let g = layout.to_poly(&Rationals, &coeffs);
                let ev = eval_poly_q(&g, &points, pm);
                if !try_extend(&mut eval_basis, ev, pm) {
                    return Err(QuasiError::CertificationFailed(alloc::format!(
                        "degree {d}: lifted generator is dependent"
                    )));
                }
                gen_degrees.push(d);
                generators.push(g);
            }
        }
        dims.push(upper);
    }
    Ok(CertifiedSeries { dims, generators })
}

/// The orbit of a fixed point with distinct coordinates under `S_n`.
fn permuted_points(n: usize, p: u64) -> Vec<Vec<u64>> {
    let base: Vec<u64> = (0..n as u64).map(|i| (1_000_003 * (i + 1) + 7 * i * i) % p).collect();
    let mut idx: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| base[i as usize]).collect());
        if !next_permutation(&mut idx) {
            break;
        }
    }
    out
}

fn eval_monomial(e: &[u32], pt: &[u64], p: u64) -> u64 {
    e.iter().zip(pt).fold(1u64, |acc, (&k, &x)| {
        let mut r = 1u64;
        for _ in 0..k {
            r = r * x % p;
        }
        acc * r % p
    })
}

fn eval_poly_q(f: &MultiPoly<Rationals>, points: &[Vec<u64>], p: u64) -> Vec<u64> {
    points
        .iter()
        .map(|pt| {
            f.terms().fold(0u64, |acc, (mono, c)| {
                debug_assert!(c.is_integer());
                let cm = c.numer().mod_floor_u64(p);
                (acc + cm * eval_monomial(mono.exponents(), pt, p)) % p
            })
        })
        .collect()
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let r = self % BigInt::from(p);
        let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
        r.to_u64().expect("reduced")
    }
}

/// Adds `v` to an echelon basis mod `p` if it is independent.
fn try_extend(basis: &mut Vec<(usize, Vec<u64>)>, mut v: Vec<u64>, p: u64) -> bool {
    for (pc, b) in basis.iter() {
        let f = v[*pc];
        if f != 0 {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = (*x + (p - f) * y) % p;
            }
        }
    }
    let Some(pc) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    let inv = PrimeField::new(p).expect("prime").inv(&v[pc]).expect("nonzero");
    for x in v.iter_mut() {
        *x = *x * inv % p;
    }
    basis.push((pc, v));
    true
}
