//! Hilbert series of `Q_m(n)`, their numerators over `prod (1 - t^i)`, and
//! the closed formula for the characteristic-zero numerator as a sum over
//! Young diagrams.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::combinat::{binomial_i128, factorial, partitions};
use crate::exact::FieldKind;
use crate::quasi::{QuasiError, QuasiField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("prefix has {got} coefficients, at least {needed} are needed")]
    PrefixTooShort { needed: usize, got: usize },
    #[error("diagram sum has a non-integer coefficient at degree {0}")]
    NonIntegerResult(usize),
    #[error("numerator has not stabilized within the computed prefix")]
    NotStabilized,
    #[error(transparent)]
    Quasi(#[from] QuasiError),
}

/// `dim Q_{m,d}(n)` for `d = 0..coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPrefix {
    pub n: usize,
    pub m: u32,
    pub field: FieldKind,
    pub coeffs: Vec<u64>,
}

/// Coefficients of the numerator polynomial, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numerator {
    pub n: usize,
    pub m: u32,
    pub field: FieldKind,
    pub coeffs: Vec<i64>,
    /// Every computed coefficient above the expected top degree is zero.
    pub stabilized: bool,
}

impl Numerator {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, d: usize) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for Numerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_t_poly(&self.coeffs))
    }
}

/// Renders integer coefficients as `1+3t^5-t^10`, ascending.
pub fn format_t_poly(coeffs: &[i64]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (d, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.unsigned_abs();
        if a != 1 || d == 0 {
            let _ = write!(out, "{a}");
        }
        match d {
            0 => {}
            1 => out.push('t'),
            _ => {
                let _ = write!(out, "t^{d}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Expected top degree of the numerator, `C(n,2)(2m+1)`.
pub fn top_degree(n: usize, m: u32) -> usize {
    binomial_i128(n as u64, 2) as usize * (2 * m as usize + 1)
}

/// Prefix length (largest degree) needed to recover and check a numerator.
pub fn required_d_max(n: usize, m: u32) -> u32 {
    (top_degree(n, m) + n * (n + 1) / 2) as u32
}

pub fn series_prefix<F: QuasiField>(field: &F, n: usize, m: u32, d_max: u32) -> Result<SeriesPrefix, HilbertError> {
    Ok(SeriesPrefix {
        n,
        m,
        field: field.kind(),
        coeffs: field.series_dims(n, m, d_max)?,
    })
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().expect("nonempty") == 0 {
        v.pop();
    }
    v
}

pub fn numerator_from_prefix(h: &SeriesPrefix) -> Result<Numerator, HilbertError> {
    let top = top_degree(h.n, h.m);
    let needed = required_d_max(h.n, h.m) as usize + 1;
    if h.coeffs.len() < needed {
        return Err(HilbertError::PrefixTooShort {
            needed,
            got: h.coeffs.len(),
        });
    }
    let mut g: Vec<i64> = h.coeffs.iter().map(|&c| i64::try_from(c).expect("fits")).collect();
    for i in 1..=h.n {
        for k in (i..g.len()).rev() {
            g[k] -= g[k - i];
        }
    }
    let stabilized = g[top + 1..].iter().all(|&c| c == 0);
    Ok(Numerator {
        n: h.n,
        m: h.m,
        field: h.field,
        coeffs: trim(g),
        stabilized,
    })
}

/// Order in which the boxes of a diagram are numbered `1..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxOrder {
    RowMajor,
    ColumnMajor,
}

/// Young diagram of a partition, with per-box arm, leg and hook lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungDiagram {
    pub parts: Vec<usize>,
    /// `(row, column)` of each box in reading order.
    pub boxes: Vec<(usize, usize)>,
    pub arms: Vec<usize>,
    pub legs: Vec<usize>,
    pub hooks: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(parts: &[usize], order: BoxOrder) -> Self {
        let parts: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be weakly decreasing");
        let conj = conjugate(&parts);
        let boxes: Vec<(usize, usize)> = match order {
            BoxOrder::RowMajor => parts
                .iter()
                .enumerate()
                .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
                .collect(),
            BoxOrder::ColumnMajor => conj
                .iter()
                .enumerate()
                .flat_map(|(c, &len)| (0..len).map(move |r| (r, c)))
                .collect(),
        };
        let arms: Vec<usize> = boxes.iter().map(|&(r, c)| parts[r] - c - 1).collect();
        let legs: Vec<usize> = boxes.iter().map(|&(r, c)| conj[c] - r - 1).collect();
        let hooks = arms.iter().zip(&legs).map(|(a, l)| a + l + 1).collect();
        YoungDiagram {
            parts,
            boxes,
            arms,
            legs,
            hooks,
        }
    }

    pub fn size(&self) -> usize {
        self.boxes.len()
    }
}

pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let width = parts.first().copied().unwrap_or(0);
    (0..width).map(|c| parts.iter().filter(|&&p| p > c).count()).collect()
}

/// All diagrams with `n` boxes.
pub fn diagrams(n: usize, order: BoxOrder) -> Vec<YoungDiagram> {
    partitions(n as u32, n)
        .into_iter()
        .map(|p| {
            let parts: Vec<usize> = p.into_iter().map(|x| x as usize).collect();
            YoungDiagram::new(&parts, order)
        })
        .collect()
}

/// Characteristic-zero numerator from the diagram formula, boxes numbered
/// row by row.
pub fn felder_veselov(n: usize, m: u32) -> Result<Numerator, HilbertError> {
    felder_veselov_with_order(n, m, BoxOrder::RowMajor)
}

/// `n! t^(m C(n,2)) sum_lambda prod_i t^(m(l_i - a_i) + l_i) (1 - t^i) / (h_i (1 - t^(h_i)))`
/// expanded as power series through degree `C(n,2)(2m+1)`.
pub fn felder_veselov_with_order(n: usize, m: u32, order: BoxOrder) -> Result<Numerator, HilbertError> {
    let top = top_degree(n, m);
    let base_shift = m as i64 * binomial_i128(n as u64, 2) as i64;
    let mut total = vec![BigRational::zero(); top + 1];
    for lam in diagrams(n, order) {
        let mut shift = base_shift;
        let mut hook_product = BigInt::one();
        // series of prod (1 - t^i) / (1 - t^(h_i)), truncated at `top`
        let mut series = vec![BigInt::zero(); top + 1];
        series[0] = BigInt::one();
        for (idx, ((&a, &l), &h)) in lam.arms.iter().zip(&lam.legs).zip(&lam.hooks).enumerate() {
            shift += m as i64 * (l as i64 - a as i64) + l as i64;
            hook_product *= h;
            let i = idx + 1;
            for k in (i..=top).rev() {
                let t = series[k - i].clone();
                series[k] -= t;
            }
            for k in h..=top {
                let t = series[k - h].clone();
                series[k] += t;
            }
        }
        assert!(shift >= 0, "negative diagram shift");
        let shift = shift as usize;
        for (k, c) in series.into_iter().enumerate() {
            if k + shift > top {
                break;
            }
            total[k + shift] += BigRational::new(c, hook_product.clone());
        }
    }
    let nf = BigRational::from_integer(factorial(n as u64));
    let mut coeffs = Vec::with_capacity(top + 1);
    for (d, c) in total.into_iter().enumerate() {
        let c = c * &nf;
        if !c.is_integer() {
            return Err(HilbertError::NonIntegerResult(d));
        }
        coeffs.push(c.to_integer().to_i64().expect("coefficient fits in i64"));
    }
    Ok(Numerator {
        n,
        m,
        field: FieldKind::Rationals,
        coeffs: trim(coeffs),
        stabilized: true,
    })
}

/// Outcome of a single structural check, carrying the offending datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check<T> {
    Pass,
    Fail(T),
}

impl<T> Check<T> {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// Fails with the actual degree.
    pub top_degree: Check<usize>,
    /// Fails with the first degree whose mirror coefficient differs.
    pub palindromic: Check<usize>,
    /// Fails with `G(1)`.
    pub rank: Check<i64>,
    /// Fails with the first negative `(degree, coefficient)`.
    pub nonneg: Check<(usize, i64)>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.top_degree.passed() && self.palindromic.passed() && self.rank.passed() && self.nonneg.passed()
    }
}

pub fn structure_checks(g: &Numerator, n: usize, m: u32) -> Result<StructureReport, HilbertError> {
    if !g.stabilized {
        return Err(HilbertError::NotStabilized);
    }
    let c = &g.coeffs;
    let top = top_degree(n, m);
    let top_degree = if g.degree() == top && c[top] != 0 {
        Check::Pass
    } else {
        Check::Fail(g.degree())
    };
    let palindromic = match (0..c.len()).find(|&i| c[i] != c[c.len() - 1 - i]) {
        None => Check::Pass,
        Some(i) => Check::Fail(i),
    };
    let at_one = g.eval_at_one();
    let rank = if BigInt::from(at_one) == factorial(n as u64) {
        Check::Pass
    } else {
        Check::Fail(at_one)
    };
    let nonneg = match c.iter().position(|&x| x < 0) {
        None => Check::Pass,
        Some(i) => Check::Fail((i, c[i])),
    };
    Ok(StructureReport {
        top_degree,
        palindromic,
        rank,
        nonneg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};

    fn numerator(coeffs: &[i64], n: usize, m: u32) -> Numerator {
        Numerator {
            n,
            m,
            field: FieldKind::Rationals,
            coeffs: coeffs.to_vec(),
            stabilized: true,
        }
    }

    #[test]
    fn t_poly_format() {
        assert_eq!(format_t_poly(&[1, 0, 0, 1]), "1+t^3");
        assert_eq!(format_t_poly(&[0, 1, -2]), "t-2t^2");
        assert_eq!(format_t_poly(&[]), "0");
    }

    #[test]
    fn series_examples() {
        let h = series_prefix(&Rationals, 2, 1, 5).unwrap();
        assert_eq!(h.coeffs, vec![1, 1, 2, 3, 4, 5]);
        let h = series_prefix(&PrimeField::new(2).unwrap(), 4, 1, 10).unwrap();
        assert_eq!(h.coeffs, vec![1, 1, 2, 3, 8, 9, 15, 23, 38, 50, 71]);
        for (n, m) in [(1usize, 0u32), (3, 2), (4, 1)] {
            assert_eq!(series_prefix(&Rationals, n, m, 0).unwrap().coeffs, vec![1]);
        }
    }

    #[test]
    fn numerator_examples() {
        let h = series_prefix(&Rationals, 2, 1, required_d_max(2, 1)).unwrap();
        let g = numerator_from_prefix(&h).unwrap();
        assert_eq!(g.coeffs, vec![1, 0, 0, 1]);
        assert!(g.stabilized);

        let f3 = PrimeField::new(3).unwrap();
        let h = series_prefix(&f3, 3, 1, required_d_max(3, 1)).unwrap();
        let g = numerator_from_prefix(&h).unwrap();
        assert_eq!(g.coeffs, vec![1, 0, 0, 2, 0, 0, 2, 0, 0, 1]);
        assert!(g.stabilized);
    }

    #[test]
    fn short_prefix_rejected() {
        let h = series_prefix(&Rationals, 2, 1, 4).unwrap();
        assert_eq!(
            numerator_from_prefix(&h),
            Err(HilbertError::PrefixTooShort { needed: 7, got: 5 })
        );
    }

    #[test]
    fn diagram_formula_examples() {
        assert_eq!(felder_veselov(2, 1).unwrap().coeffs, vec![1, 0, 0, 1]);
        assert_eq!(felder_veselov(2, 0).unwrap().coeffs, vec![1, 1]);
        assert_eq!(felder_veselov(3, 0).unwrap().coeffs, vec![1, 2, 2, 1]);
    }

    #[test]
    fn box_order_does_not_matter() {
        for n in 1..=5 {
            for m in 0..=3 {
                assert_eq!(
                    felder_veselov_with_order(n, m, BoxOrder::RowMajor),
                    felder_veselov_with_order(n, m, BoxOrder::ColumnMajor)
                );
            }
        }
    }

    #[test]
    fn diagram_formula_shape() {
        for n in 2..=5 {
            for m in 0..=3 {
                let g = felder_veselov(n, m).unwrap();
                assert_eq!(BigInt::from(g.eval_at_one()), factorial(n as u64));
                assert_eq!(g.degree(), top_degree(n, m));
                if m > 0 {
                    let k = (m as usize) * n + 1;
                    assert_eq!(g.coeff(0), 1);
                    assert!((1..k).all(|d| g.coeff(d) == 0), "n={n} m={m}");
                    assert_eq!(g.coeff(k), n as i64 - 1);
                }
            }
        }
    }

    // Standard tableaux counted by removing corners.
    fn syt_count(parts: &[usize]) -> u64 {
        if parts.iter().all(|&p| p == 0) {
            return 1;
        }
        let mut total = 0;
        for r in 0..parts.len() {
            let next = parts.get(r + 1).copied().unwrap_or(0);
            if parts[r] > next {
                let mut q = parts.to_vec();
                q[r] -= 1;
                total += syt_count(&q);
            }
        }
        total
    }

    #[test]
    fn hooks_satisfy_hook_length_formula() {
        for n in 1..=8 {
            for lam in diagrams(n, BoxOrder::RowMajor) {
                let prod: u64 = lam.hooks.iter().map(|&h| h as u64).product();
                assert_eq!(BigInt::from(prod * syt_count(&lam.parts)), factorial(n as u64));
                // legs and arms swap under transposition
                let t = YoungDiagram::new(&conjugate(&lam.parts), BoxOrder::ColumnMajor);
                assert_eq!(t.arms, lam.legs);
                assert_eq!(t.legs, lam.arms);
            }
        }
    }

    #[test]
    fn structure_examples() {
        let r = structure_checks(&numerator(&[1, 0, 0, 1], 2, 1), 2, 1).unwrap();
        assert!(r.all_pass());
        let r = structure_checks(&numerator(&[1, 0, 0, 2, 0, 0, 2, 0, 0, 1], 3, 1), 3, 1).unwrap();
        assert!(r.all_pass());
        let mut g = numerator(&[1, 0, 0, 1], 2, 1);
        g.stabilized = false;
        assert_eq!(structure_checks(&g, 2, 1), Err(HilbertError::NotStabilized));
        let bad = structure_checks(&numerator(&[1, 2, -1, 0, 1], 2, 1), 2, 1).unwrap();
        assert_eq!(bad.top_degree, Check::Fail(4));
        assert_eq!(bad.palindromic, Check::Fail(1));
        assert_eq!(bad.rank, Check::Fail(3));
        assert_eq!(bad.nonneg, Check::Fail((2, -1)));
    }

    #[test]
    fn diagram_formula_matches_nullspace_small() {
        for (n, m) in [(2usize, 0u32), (2, 1), (2, 2), (3, 0), (3, 1)] {
            let h = series_prefix(&Rationals, n, m, required_d_max(n, m)).unwrap();
            assert_eq!(numerator_from_prefix(&h).unwrap(), felder_veselov(n, m).unwrap());
        }
    }
}
