//! Elimination over `F_p` for `p < 2^31` on machine words.
//!
//! Rows are kept as `u64` accumulators. Adding `f * pivot_row` with both
//! factors below `p` can be repeated a bounded number of times before the
//! row must be reduced; the per-row counter tracks that budget. Only the
//! entry that determines the next multiplier is reduced eagerly.

use alloc::vec::Vec;

/// Moduli at or above this use the generic path.
pub const FAST_MODULUS_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModpEchelon {
    pub pivots: Vec<usize>,
    /// Echelon rows (pivot entry 1), empty when only the rank was requested.
    pub rows: Vec<Vec<u32>>,
}

impl ModpEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u32
}

/// Echelon form of `rows` (each of length `cols`, entries in `[0, p)`).
/// With `reduced`, pivot columns are cleared above as well and the rows are
/// returned; otherwise only the pivot columns are meaningful.
pub fn echelon_mod_p(rows: Vec<Vec<u32>>, cols: usize, p: u32, reduced: bool) -> ModpEchelon {
    assert!((p as u64) < FAST_MODULUS_LIMIT && p >= 2);
    let pm = p as u64;
    let budget = ((u64::MAX - (pm - 1)) / ((pm - 1) * (pm - 1)).max(1)).min(u32::MAX as u64) as u32;
    let mut work: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            debug_assert_eq!(r.len(), cols);
            r.into_iter().map(u64::from).collect()
        })
        .collect();
    let nrows = work.len();
    let mut used = alloc::vec![0u32; nrows];
    let mut pivots = Vec::new();
    let mut piv = alloc::vec![0u32; cols];
    let mut rank = 0;

    for c in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| !work[r][c].is_multiple_of(pm)) else {
            continue;
        };
        work.swap(rank, r);
        used.swap(rank, r);
        let inv = inv_mod((work[rank][c] % pm) as u32, p) as u64;
        for (dst, src) in piv[c..].iter_mut().zip(&mut work[rank][c..]) {
            let v = (*src % pm) * inv % pm;
            *src = v;
            *dst = v as u32;
        }
        used[rank] = 0;

        let targets = if reduced { 0..nrows } else { rank + 1..nrows };
        for i in targets {
            if i == rank {
                continue;
            }
            let x = work[i][c] % pm;
            if x == 0 {
                work[i][c] = 0;
                continue;
            }
            if used[i] >= budget {
                for v in work[i][c..].iter_mut() {
                    *v %= pm;
                }
                used[i] = 0;
            }
            let f = pm - x;
            for (dst, &s) in work[i][c..].iter_mut().zip(&piv[c..]) {
                *dst += f * s as u64;
            }
            used[i] += 1;
        }
        pivots.push(c);
        rank += 1;
    }

    let rows = if reduced {
        work.truncate(rank);
        work.into_iter()
            .map(|r| r.into_iter().map(|v| (v % pm) as u32).collect())
            .collect()
    } else {
        Vec::new()
    };
    ModpEchelon { pivots, rows }
}
