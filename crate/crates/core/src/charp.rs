//! Primes where `Q_m(n)` over `F_p` is larger than in characteristic zero:
//! the `(a, k)` witness inequality, the explicit low-degree element
//! `P_k^(p^a) * Delta^(2b)`, and scans over `(m, p)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::combinat::partition_count;
use crate::exact::{is_prime, Field, PrimeField, Rationals};
use crate::linsolve::clear_denominators;
use crate::multipoly::MultiPoly;
use crate::quasi::{
    default_cap, is_quasi_invariant, lowest_nonsymmetric, restricted_system, slice_dim, QuasiError, QuasiField,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharpError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("no non-symmetric element over F_{p} up to degree {cap} (n = {n}, m = {m})")]
    CapExceeded { n: usize, m: u32, p: u64, cap: u32 },
    #[error(transparent)]
    Quasi(#[from] QuasiError),
}

/// Integers `(a, k)` satisfying the prime-power inequality for `(m, n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub a: u32,
    pub k: u32,
    pub p: u64,
    pub m: u32,
    pub n: usize,
    /// `2m + 1 - p^a (2k + 1)`, negative when the power alone overshoots.
    pub two_b: i64,
}

impl Witness {
    pub fn prime_power(&self) -> u128 {
        (self.p as u128).pow(self.a)
    }

    /// Degree of the constructed element, using `deg P_k = kn + 1`.
    pub fn construction_degree(&self) -> u64 {
        let q = self.prime_power() as u64;
        let pk = self.k as u64 * self.n as u64 + 1;
        let delta = if self.two_b > 0 {
            self.two_b as u64 * (self.n as u64 * (self.n as u64 - 1) / 2)
        } else {
            0
        };
        q * pk + delta
    }
}

fn check_params(n: usize, p: u64) -> Result<(), CharpError> {
    if n < 3 {
        return Err(CharpError::InvalidParams(format!("n = {n} must be at least 3")));
    }
    if !is_prime(p) {
        return Err(CharpError::InvalidParams(format!("{p} is not prime")));
    }
    Ok(())
}

/// `(mn(n-2) + C(n,2)) / (n(n-2)k + C(n,2) - 1) <= q <= mn / (nk + 1)`,
/// cross-multiplied (both denominators are positive for `n >= 3`).
pub fn inequality_holds(m: u32, n: usize, q: u128, k: u32) -> bool {
    let (m, n, k) = (m as u128, n as u128, k as u128);
    let c2 = n * (n - 1) / 2;
    let lower_ok = m * n * (n - 2) + c2 <= q * (n * (n - 2) * k + c2 - 1);
    let upper_ok = q * (n * k + 1) <= m * n;
    lower_ok && upper_ok
}

/// `1/n <= {m/q} <= (n+1)/(2n) - (n-1)/(2(n-2)q)`, in exact rationals.
pub fn fractional_form_holds(m: u32, n: usize, q: u128) -> bool {
    let r = |a: i128, b: i128| BigRational::new(BigInt::from(a), BigInt::from(b));
    let (mi, ni, qi) = (m as i128, n as i128, q as i128);
    let frac = r(mi.rem_euclid(qi), qi);
    let lower = r(1, ni);
    let upper = r(ni + 1, 2 * ni) - r(ni - 1, 2 * (ni - 2) * qi);
    lower <= frac && frac <= upper
}

/// Lexicographically smallest `(a, k)` with `a >= 1`.
pub fn witness_search(m: u32, n: usize, p: u64) -> Result<Option<Witness>, CharpError> {
    Ok(all_witnesses(m, n, p)?.into_iter().next())
}

/// Every `(a, k)` satisfying the inequality, in lexicographic order.
pub fn all_witnesses(m: u32, n: usize, p: u64) -> Result<Vec<Witness>, CharpError> {
    check_params(n, p)?;
    let mn = m as u128 * n as u128;
    let mut out = Vec::new();
    let mut a = 1u32;
    let mut q = p as u128;
    while q <= mn {
        let mut k = 0u32;
        // nk + 1 <= mn / q
        while q * (n as u128 * k as u128 + 1) <= mn {
            if inequality_holds(m, n, q, k) {
                let two_b = 2 * m as i64 + 1 - (q as i64) * (2 * k as i64 + 1);
                out.push(Witness { a, k, p, m, n, two_b });
            }
            k += 1;
        }
        a += 1;
        q *= p as u128;
    }
    Ok(out)
}

/// The witness whose construction has the lowest degree, ties going to the
/// smaller `k`. This is the labelling of the published `n = 3` table.
pub fn minimal_witness(m: u32, n: usize, p: u64) -> Result<Option<Witness>, CharpError> {
    Ok(all_witnesses(m, n, p)?
        .into_iter()
        .min_by_key(|w| (w.construction_degree(), w.k, w.a)))
}

/// For each prime power `p^a <= mn`, the inequality has a solution `k`
/// exactly when the fractional-part condition holds, and then
/// `k = floor(m / p^a)`. Returns the first `a` where this fails.
pub fn fractional_cross_check(m: u32, n: usize, p: u64) -> Result<(), u32> {
    let mn = m as u128 * n as u128;
    let (mut a, mut q) = (1u32, p as u128);
    while q <= mn {
        let ks: Vec<u32> = (0..)
            .take_while(|&k: &u32| q * (n as u128 * k as u128 + 1) <= mn)
            .filter(|&k| inequality_holds(m, n, q, k))
            .collect();
        let frac = fractional_form_holds(m, n, q);
        let expected_k = (m as u128 / q) as u32;
        let consistent = match ks.as_slice() {
            [] => !frac,
            [k] => frac && *k == expected_k,
            _ => false,
        };
        if !consistent {
            return Err(a);
        }
        a += 1;
        q *= p as u128;
    }
    Ok(())
}

/// `f^(p^a)` over `F_p`: coefficients are fixed by Frobenius, so only the
/// exponents are scaled.
pub fn frobenius_power(f: &MultiPoly<PrimeField>, a: u32) -> MultiPoly<PrimeField> {
    let q = (f.ring().modulus() as u32).pow(a);
    MultiPoly::from_terms(
        *f.ring(),
        f.nvars(),
        f.terms()
            .map(|(m, c)| (m.exponents().iter().map(|&e| e * q).collect(), *c)),
    )
}

/// Integer, content-free representatives of the non-symmetric part of the
/// lowest non-symmetric slice of `Q_k(n)` over `Q`.
pub fn lowest_generators_q(n: usize, k: u32) -> Result<(u32, Vec<MultiPoly<Rationals>>), CharpError> {
    let (d, _) = lowest_nonsymmetric(&Rationals, n, k, default_cap(n, k))?;
    let (layout, sys) = restricted_system(&Rationals, n, k, d);
    let basis = Rationals.kernel_basis(&sys);
    let polys = basis
        .iter()
        .map(|v| {
            let ints = clear_denominators(v);
            let q: Vec<BigRational> = ints.into_iter().map(BigRational::from_integer).collect();
            layout.to_poly(&Rationals, &q)
        })
        .collect();
    Ok((d, polys))
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub poly: MultiPoly<PrimeField>,
    pub degree: u32,
    /// The `Delta^(2b)` factor was dropped because `2b < 0`.
    pub fallback_used: bool,
    /// The integer `P_k` that was reduced mod `p`.
    pub p_k: MultiPoly<Rationals>,
}

/// Builds `P_k^(p^a) * prod_{i<j} (x_i - x_j)^(2b)` over `F_p` and checks
/// that it is a non-symmetric `m`-quasi-invariant of degree at most `mn`.
pub fn construct_low_degree(w: &Witness) -> Result<Construction, CharpError> {
    check_params(w.n, w.p)?;
    let field = PrimeField::new(w.p).map_err(|e| CharpError::InvalidParams(format!("{e}")))?;
    let (_, candidates) = lowest_generators_q(w.n, w.k)?;
    let mut reduced = None;
    for c in &candidates {
        let r = c
            .map_coeffs(field, |q| field.from_rational(q))
            .map_err(|e| CharpError::ConstructionFailed(format!("{e}")))?;
        if !r.is_zero() && !r.is_symmetric() {
            reduced = Some((c.clone(), r));
            break;
        }
    }
    let Some((p_k, pk_mod)) = reduced else {
        return Err(CharpError::ConstructionFailed(format!(
            "every P_{} reduces to a symmetric polynomial mod {}",
            w.k, w.p
        )));
    };
    let power = frobenius_power(&pk_mod, w.a);
    let fallback_used = w.two_b < 0;
    let poly = if fallback_used {
        power
    } else {
        &power * &MultiPoly::diff_product(field, w.n, w.two_b as u32)
    };
    let degree = poly.total_degree().unwrap_or(0);
    let mn = w.m * w.n as u32;
    if degree > mn {
        return Err(CharpError::ConstructionFailed(format!("degree {degree} exceeds mn = {mn}")));
    }
    if poly.is_symmetric() {
        return Err(CharpError::ConstructionFailed("result is symmetric".into()));
    }
    if !is_quasi_invariant(&poly, w.m) {
        return Err(CharpError::ConstructionFailed(format!(
            "result is not {}-quasi-invariant over F_{}",
            w.m, w.p
        )));
    }
    Ok(Construction {
        poly,
        degree,
        fallback_used,
        p_k,
    })
}

/// One `(m, p)` entry of a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalyCell {
    pub n: usize,
    pub m: u32,
    pub p: u64,
    /// The lowest non-symmetric degree over `F_p` is below `mn + 1`.
    pub anomalous: bool,
    /// Lexicographically smallest witness.
    pub witness: Option<Witness>,
    /// Lowest-degree witness, as labelled in tables.
    pub table_witness: Option<Witness>,
    pub lowest_fp: u32,
    pub lowest_q: u32,
    /// Degree of the construction from `table_witness`.
    pub construction_degree: Option<u32>,
    pub fallback_used: Option<bool>,
    /// Full series comparison through the numerator prefix, when requested.
    pub series_differs: Option<bool>,
}

impl AnomalyCell {
    /// Witness present exactly when anomalous (the converse direction is
    /// only conjectural).
    pub fn agrees_with_witness(&self) -> bool {
        self.anomalous == self.witness.is_some()
    }

    /// The lowest non-symmetric element has the constructed degree.
    pub fn construction_is_lowest(&self) -> Option<bool> {
        self.construction_degree.map(|d| d == self.lowest_fp)
    }
}

/// Lowest non-symmetric degree over `Q` with cap `mn + 1`.
pub fn lowest_q_degree(n: usize, m: u32) -> Result<u32, CharpError> {
    Ok(lowest_nonsymmetric(&Rationals, n, m, default_cap(n, m))?.0)
}

pub fn anomaly_cell(n: usize, m: u32, p: u64, lowest_q: u32, full_series: bool) -> Result<AnomalyCell, CharpError> {
    check_params(n, p)?;
    let field = PrimeField::new(p).map_err(|e| CharpError::InvalidParams(format!("{e}")))?;
    let cap = default_cap(n, m);
    // Dimensions over F_p dominate those over Q, so a non-symmetric element
    // must appear by mn + 1; failing to find one is reported, not assumed.
    let lowest_fp = match lowest_nonsymmetric(&field, n, m, cap) {
        Ok((d, _)) => d,
        Err(QuasiError::NotFound(_)) => return Err(CharpError::CapExceeded { n, m, p, cap }),
        Err(e) => return Err(e.into()),
    };
    let witness = witness_search(m, n, p)?;
    let table_witness = minimal_witness(m, n, p)?;
    if fractional_cross_check(m, n, p).is_err() {
        return Err(CharpError::ConstructionFailed(format!(
            "fractional-part form disagrees for m = {m}, p = {p}"
        )));
    }
    if let Some(w) = &witness {
        construct_low_degree(w)?;
    }
    let (construction_degree, fallback_used) = match &table_witness {
        Some(w) => {
            let c = construct_low_degree(w)?;
            if c.degree < lowest_fp {
                return Err(CharpError::ConstructionFailed(format!(
                    "constructed degree {} below scanned lowest degree {lowest_fp}",
                    c.degree
                )));
            }
            let d = c.degree;
            if slice_dim(&field, n, m, d) as u64 <= partition_count(d as usize, n) {
                return Err(CharpError::ConstructionFailed(format!("slice {d} over F_{p} is symmetric")));
            }
            (Some(d), Some(c.fallback_used))
        }
        None => (None, None),
    };
    let series_differs = if full_series {
        let d_max = crate::hilbert::required_d_max(n, m);
        let fp = field.series_dims(n, m, d_max)?;
        let q = Rationals.series_dims(n, m, d_max)?;
        Some(fp != q)
    } else {
        None
    };
    Ok(AnomalyCell {
        n,
        m,
        p,
        anomalous: lowest_fp < cap,
        witness,
        table_witness,
        lowest_fp,
        lowest_q,
        construction_degree,
        fallback_used,
        series_differs,
    })
}

/// All cells `m <= m_max`, primes `p <= p_max`, ordered by `(m, p)`.
pub fn anomaly_scan(n: usize, m_max: u32, p_max: u64) -> Result<Vec<AnomalyCell>, CharpError> {
    let primes = crate::exact::primes_up_to(p_max);
    let mut out = Vec::new();
    for m in 0..=m_max {
        let lq = lowest_q_degree(n, m)?;
        for &p in &primes {
            out.push(anomaly_cell(n, m, p, lq, false)?);
        }
    }
    Ok(out)
}
