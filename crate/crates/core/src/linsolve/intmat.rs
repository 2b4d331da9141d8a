//! Integer constraint matrices and certified rational kernels.
//!
//! A kernel vector over `Q` is recovered from echelon forms modulo several
//! word-size primes by Chinese remaindering and rational reconstruction,
//! then checked by exact integer multiplication. A verified vector is a
//! proof on its own; the modular rank never exceeds the rational rank, so
//! verified vectors for every free column also certify the rank.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::modp::{echelon_mod_p, ModpEchelon};
use crate::exact::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("column {0} is a pivot column, not a free one")]
    NotFree(usize),
    #[error("rational reconstruction did not converge after {0} primes")]
    NoConvergence(usize),
}

/// Sparse integer matrix with a fixed column count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, i128)>>,
}

/// Lifted kernel vectors, keyed by their free column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedKernel {
    pub pivots: Vec<usize>,
    /// `(free column, primitive integer kernel vector)`; the vector is
    /// positive at its free column and zero at every other free column.
    pub vectors: Vec<(usize, Vec<BigInt>)>,
    pub primes_used: usize,
}

/// Primes just below `2^31`, descending.
pub fn lifting_primes() -> impl Iterator<Item = u32> {
    (1u32 << 30..1u32 << 31).rev().filter(|&p| is_prime(p as u64))
}

/// Smallest-height `a/b` congruent to `u` modulo `m`, if one exists with
/// `|a|, b <= sqrt(m/2)`.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = core::mem::replace(&mut r1, r2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

impl IntMatrix {
    pub fn new(cols: usize) -> Self {
        IntMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    /// Appends a row given as `(column, value)` pairs; zeros are dropped and
    /// repeated columns summed.
    pub fn push_row(&mut self, mut entries: Vec<(usize, i128)>) {
        entries.sort_by_key(|e| e.0);
        let mut row: Vec<(usize, i128)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.cols, "column out of range");
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| e.1 != 0);
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, i128)>] {
        &self.rows
    }

    pub fn dense_mod(&self, p: u32) -> Vec<Vec<u32>> {
        let pm = p as i128;
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0u32; self.cols];
                for &(c, v) in row {
                    d[c] = v.rem_euclid(pm) as u32;
                }
                d
            })
            .collect()
    }

    pub fn echelon_mod(&self, p: u32, reduced: bool) -> ModpEchelon {
        echelon_mod_p(self.dense_mod(p), self.cols, p, reduced)
    }

    pub fn rank_mod(&self, p: u32) -> usize {
        self.echelon_mod(p, false).rank()
    }

    /// Exact test of `M v = 0`.
    pub fn annihilates(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.cols);
        self.rows.iter().all(|row| {
            let mut acc = BigInt::zero();
            for &(c, x) in row {
                if !v[c].is_zero() {
                    acc += &v[c] * BigInt::from(x);
                }
            }
            acc.is_zero()
        })
    }

    /// Rational kernel vectors for the requested free columns (all free
    /// columns when `wanted` is `None`), each verified exactly.
    ///
    /// Among the primes tried, the one with the largest rank and then the
    /// lexicographically smallest pivot set is taken as the reference; the
    /// other primes with the same pivots are combined by CRT.
    pub fn lift_kernel(&self, wanted: Option<&[usize]>, max_primes: usize) -> Result<LiftedKernel, LiftError> {
        let mut state: Option<CrtState> = None;
        let mut done: Vec<(usize, Vec<BigInt>)> = Vec::new();
        let mut tried = 0;
        let mut next_attempt = 1;
        for p in lifting_primes() {
            if tried == max_primes {
                break;
            }
            tried += 1;
            let ech = self.echelon_mod(p, true);
            let reset = match &state {
                None => true,
                Some(s) => {
                    ech.rank() > s.pivots.len()
                        || (ech.rank() == s.pivots.len() && ech.pivots < s.pivots)
                }
            };
            if reset {
                let free = free_columns(&ech.pivots, self.cols);
                let targets = match wanted {
                    Some(w) => {
                        if let Some(&bad) = w.iter().find(|c| !free.contains(c)) {
                            if state.is_none() {
                                return Err(LiftError::NotFree(bad));
                            }
                            continue;
                        }
                        w.to_vec()
                    }
                    None => free,
                };
                done.clear();
                state = Some(CrtState::new(&ech, p, targets));
                next_attempt = 1;
            } else {
                let s = state.as_mut().expect("state");
                if ech.pivots != s.pivots {
                    continue;
                }
                s.absorb(&ech, p);
            }
            let s = state.as_mut().expect("state");
            if s.primes < next_attempt {
                continue;
            }
            next_attempt = s.primes + s.primes.div_ceil(2);
            let mut k = 0;
            while k < s.targets.len() {
                let f = s.targets[k];
                match s.reconstruct(k, self.cols) {
                    Some(v) if self.annihilates(&v) => {
                        done.push((f, v));
                        s.remove(k);
                    }
                    _ => k += 1,
                }
            }
            if s.targets.is_empty() {
                done.sort_by_key(|e| e.0);
                return Ok(LiftedKernel {
                    pivots: s.pivots.clone(),
                    vectors: done,
                    primes_used: tried,
                });
            }
        }
        Err(LiftError::NoConvergence(tried))
    }
}

fn free_columns(pivots: &[usize], cols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

struct CrtState {
    pivots: Vec<usize>,
    targets: Vec<usize>,
    /// residues[k][row]: echelon entry in column targets[k], in [0, modulus)
    residues: Vec<Vec<BigInt>>,
    modulus: BigInt,
    primes: usize,
}

impl CrtState {
    fn new(ech: &ModpEchelon, p: u32, targets: Vec<usize>) -> Self {
        let residues = targets
            .iter()
            .map(|&f| ech.rows.iter().map(|r| BigInt::from(r[f])).collect())
            .collect();
        CrtState {
            pivots: ech.pivots.clone(),
            targets,
            residues,
            modulus: BigInt::from(p),
            primes: 1,
        }
    }

    fn absorb(&mut self, ech: &ModpEchelon, p: u32) {
        let pm = p as u64;
        let m_mod_p = (&self.modulus % pm).to_u64().expect("small");
        let inv = mod_inverse(m_mod_p, pm);
        for (k, &f) in self.targets.iter().enumerate() {
            for (row, res) in ech.rows.iter().zip(self.residues[k].iter_mut()) {
                let a_mod_p = (&*res % pm).to_u64().expect("small");
                let b = row[f] as u64;
                let t = (b + pm - a_mod_p) % pm * inv % pm;
                *res += &self.modulus * t;
            }
        }
        self.modulus *= pm;
        self.primes += 1;
    }

    fn remove(&mut self, k: usize) {
        self.targets.remove(k);
        self.residues.remove(k);
    }

    /// Kernel vector for target `k`: 1 at the free column, minus the echelon
    /// column at the pivots, scaled to a primitive integer vector.
    fn reconstruct(&self, k: usize, cols: usize) -> Option<Vec<BigInt>> {
        let mut den = BigInt::one();
        let mut nums: Vec<BigInt> = Vec::with_capacity(self.pivots.len());
        let mut dens: Vec<BigInt> = Vec::with_capacity(self.pivots.len());
        for u in &self.residues[k] {
            let w = (u * &den).mod_floor(&self.modulus);
            let (a, b) = rational_reconstruct(&w, &self.modulus)?;
            // entry = a / (b * den)
            let d = &b * &den;
            nums.push(a);
            dens.push(d);
            den *= b;
        }
        let lcm = dens.iter().fold(den.clone(), |acc, d| acc.lcm(d));
        let mut v = vec![BigInt::zero(); cols];
        v[self.targets[k]] = lcm.clone();
        for ((a, d), &pc) in nums.iter().zip(&dens).zip(&self.pivots) {
            v[pc] = -(a * (&lcm / d));
        }
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            for x in v.iter_mut() {
                *x = &*x / &g;
            }
        }
        if v[self.targets[k]].sign() == Sign::Minus {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        Some(v)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}
