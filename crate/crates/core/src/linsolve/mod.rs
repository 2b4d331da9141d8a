//! Exact dense linear algebra: reduced row echelon form, rank and nullspace
//! over any [`Field`].
//!
//! Pivots are chosen deterministically (leftmost column, topmost nonzero
//! row), so bases are reproducible. Over the rationals the elimination is
//! fraction-free (Bareiss); over small prime fields it runs on machine
//! words with delayed reduction.

mod intmat;
mod modp;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{Field, PrimeField, Rationals};

pub use intmat::{lifting_primes, rational_reconstruct, IntMatrix, LiftError, LiftedKernel};
pub use modp::{echelon_mod_p, ModpEchelon, FAST_MODULUS_LIMIT};

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

/// Reduced row echelon form: `rows[k]` has a 1 in column `pivots[k]` and
/// zeros in every other pivot column.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }
}

impl<E: Clone> Echelon<E> {
    /// Kernel basis: one vector per free column, with a 1 there, zeros at
    /// the other free columns, and the negated echelon entries at pivots.
    pub fn nullspace<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![field.zero(); self.cols];
                v[f] = field.one();
                for (k, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = field.neg(&self.rows[k][f]);
                }
                v
            })
            .collect()
    }
}

/// Fields with an elimination routine.
pub trait Eliminate: Field {
    fn echelon(&self, rows: Vec<Vec<Self::Elem>>, cols: usize) -> Echelon<Self::Elem>;
}

impl Eliminate for PrimeField {
    fn echelon(&self, rows: Vec<Vec<u64>>, cols: usize) -> Echelon<u64> {
        let p = self.modulus();
        if p >= FAST_MODULUS_LIMIT {
            return gauss_jordan(self, rows, cols);
        }
        let small: Vec<Vec<u32>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as u32).collect())
            .collect();
        let e = echelon_mod_p(small, cols, p as u32, true);
        Echelon {
            rows: e
                .rows
                .into_iter()
                .map(|r| r.into_iter().map(u64::from).collect())
                .collect(),
            pivots: e.pivots,
            cols,
        }
    }
}

impl Eliminate for Rationals {
    fn echelon(&self, rows: Vec<Vec<BigRational>>, cols: usize) -> Echelon<BigRational> {
        let ints = rows.into_iter().map(|r| clear_denominators(&r)).collect();
        bareiss(ints, cols)
    }
}

/// Textbook Gauss-Jordan over any field.
pub fn gauss_jordan<F: Field>(field: &F, mut a: Vec<Vec<F::Elem>>, cols: usize) -> Echelon<F::Elem> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..nrows).find(|&r| !field.is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(rank, r);
        let inv = field.inv(&a[rank][c]).expect("nonzero pivot");
        for x in a[rank].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..nrows {
            if i == rank || field.is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            let pivot_row = a[rank].clone();
            for (x, p) in a[i][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                *x = field.sub(x, &field.mul(&f, p));
            }
        }
        pivots.push(c);
        rank += 1;
    }
    a.truncate(rank);
    Echelon { rows: a, pivots, cols }
}

/// Scales a rational row to a primitive integer row with the same span.
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Fraction-free Gauss-Jordan on an integer matrix. Every intermediate entry
/// is a minor of the input, so all divisions by the previous pivot are exact.
pub fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon<BigRational> {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..nrows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, r);
        let piv = a[rank][c].clone();
        let (head, rest) = a.split_at_mut(rank);
        let (prow, tail) = rest.split_first_mut().expect("pivot row");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let f = row[c].clone();
            for j in 0..cols {
                let mut t = &piv * &row[j];
                if !f.is_zero() {
                    t -= &f * &prow[j];
                }
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
        }
        prev = piv;
        pivots.push(c);
        rank += 1;
    }
    a.truncate(rank);
    let rows = a
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let d = row[pc].clone();
            row.into_iter()
                .map(|x| BigRational::new(x, d.clone()))
                .collect()
        })
        .collect();
    Echelon { rows, pivots, cols }
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        ExactMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// Builds from row vectors; every row must have `cols` entries.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            entries.extend(r);
        }
        ExactMatrix {
            field,
            rows: nrows,
            cols,
            entries,
        }
    }

    pub fn from_ints(field: F, cols: usize, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        ExactMatrix::from_rows(field, cols, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = ExactMatrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(self.field.zero(), |acc, (a, b)| {
                    self.field.add(&acc, &self.field.mul(a, b))
                })
            })
            .collect()
    }

    fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }
}

impl<F: Eliminate> ExactMatrix<F> {
    pub fn echelon(&self) -> Echelon<F::Elem> {
        self.field.echelon(self.row_vecs(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn nullspace(&self) -> Vec<Vec<F::Elem>> {
        self.echelon().nullspace(&self.field)
    }
}

/// Indices of a maximal linearly independent subset of `rows`, greedily
/// keeping earlier rows first.
pub fn independent_rows<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let mut keep = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (pc, b) in &basis {
            if field.is_zero(&v[*pc]) {
                continue;
            }
            let f = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x = field.sub(x, &field.mul(&f, y));
            }
        }
        if let Some(pc) = v.iter().position(|x| !field.is_zero(x)) {
            let inv = field.inv(&v[pc]).expect("nonzero");
            for x in v.iter_mut() {
                *x = field.mul(x, &inv);
            }
            basis.push((pc, v));
            keep.push(idx);
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn nullspace_examples() {
        let id = ExactMatrix::from_ints(Rationals, 2, &[&[1, 0], &[0, 1]]);
        assert!(id.nullspace().is_empty());

        let f2 = PrimeField::new(2).unwrap();
        let m = ExactMatrix::from_ints(f2, 2, &[&[1, 1]]);
        assert_eq!(m.nullspace(), vec![vec![1, 1]]);

        let m = ExactMatrix::from_ints(Rationals, 3, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0], vec![q(-2), q(1), q(0)]);
        assert_eq!(ns[1], vec![q(-3), q(0), q(1)]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        let m = ExactMatrix::<Rationals>::from_rows(Rationals, 3, vec![]);
        assert_eq!(m.nullspace().len(), 3);
        let z = ExactMatrix::zeros(PrimeField::new(5).unwrap(), 2, 4);
        assert_eq!(z.nullspace().len(), 4);
    }

    #[test]
    fn large_modulus_uses_generic_path() {
        let f = PrimeField::new(18_446_744_073_709_551_557).unwrap();
        let m = ExactMatrix::from_ints(f, 3, &[&[1, 2, 3], &[2, 4, 7]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| *x == 0));
    }

    #[test]
    fn independent_rows_drops_dependents() {
        let rows: Vec<Vec<BigRational>> = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4]]
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        assert_eq!(independent_rows(&Rationals, &rows), vec![0, 2]);
    }

    fn small_int_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..7, 0usize..7).prop_flat_map(|(cols, rows)| {
            (
                Just(cols),
                proptest::collection::vec(proptest::collection::vec(-3i64..4, cols), rows),
            )
        })
    }

    fn to_matrix<F: Field>(field: F, cols: usize, rows: &[Vec<i64>]) -> ExactMatrix<F> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        ExactMatrix::from_rows(field, cols, rows)
    }

    fn check_kernel<F: Eliminate>(m: &ExactMatrix<F>) -> Result<(), TestCaseError> {
        let ns = m.nullspace();
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(|x| m.field().is_zero(x)));
        }
        // rank from an independent reduction of the transpose
        let rank_t = m.transpose().rank();
        prop_assert_eq!(ns.len() + rank_t, m.cols());
        Ok(())
    }

    proptest! {
        #[test]
        fn kernel_exact_over_q((cols, rows) in small_int_matrix()) {
            check_kernel(&to_matrix(Rationals, cols, &rows))?;
        }

        #[test]
        fn kernel_exact_mod_p((cols, rows) in small_int_matrix(), pi in 0usize..4) {
            let p = [2u64, 3, 7, 1_000_003][pi];
            check_kernel(&to_matrix(PrimeField::new(p).unwrap(), cols, &rows))?;
        }

        #[test]
        fn bareiss_matches_textbook((cols, rows) in small_int_matrix()) {
            let m = to_matrix(Rationals, cols, &rows);
            let fast = m.echelon();
            let slow = gauss_jordan(&Rationals, m.row_vecs(), cols);
            prop_assert_eq!(&fast, &slow);
            // re-reducing an echelon form changes nothing
            let again = Rationals.echelon(fast.rows.clone(), cols);
            prop_assert_eq!(again, fast);
        }

        #[test]
        fn fast_mod_p_matches_textbook((cols, rows) in small_int_matrix(), pi in 0usize..3) {
            let f = PrimeField::new([2u64, 5, 2_147_483_629][pi]).unwrap();
            let m = to_matrix(f, cols, &rows);
            prop_assert_eq!(m.echelon(), gauss_jordan(&f, m.row_vecs(), cols));
        }

        #[test]
        fn rank_over_q_bounds_rank_mod_p((cols, rows) in small_int_matrix(), pi in 0usize..3) {
            let f = PrimeField::new([2u64, 3, 5][pi]).unwrap();
            prop_assert!(to_matrix(f, cols, &rows).rank() <= to_matrix(Rationals, cols, &rows).rank());
        }
    }
}
