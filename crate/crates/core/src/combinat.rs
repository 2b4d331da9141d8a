//! Small combinatorial helpers: binomials, partitions and monomial
//! enumeration.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, k)` in machine integers; panics on overflow.
pub fn binomial_i128(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as i128)
            .expect("binomial overflow")
            / (i + 1) as i128;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// Number of partitions of `d` into at most `n` parts.
pub fn partition_count(d: usize, n: usize) -> u64 {
    // p[k][j]: partitions of j into parts of size <= k (conjugate: at most k parts)
    let mut p = vec![0u64; d + 1];
    p[0] = 1;
    for part in 1..=n {
        for j in part..=d {
            p[j] += p[j - part];
        }
    }
    p[d]
}

/// Weakly decreasing exponent vectors of length `n` summing to `d`,
/// in descending lexicographic order.
pub fn partitions(d: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = rem.min(max);
        for v in (0..=hi).rev() {
            if (v as u64) * (slots as u64) < rem as u64 {
                break;
            }
            cur.push(v);
            rec(rem - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, d, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent vectors of length `n` with total degree `d`, in descending
/// lexicographic order.
pub fn monomials_of_degree(d: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=rem).rev() {
            cur.push(v);
            rec(rem - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Number of exponent vectors of length `n` and degree `d`.
pub fn monomial_count(d: usize, n: usize) -> u64 {
    if n == 0 {
        return u64::from(d == 0);
    }
    binomial_i128((d + n - 1) as u64, (n - 1) as u64) as u64
}
