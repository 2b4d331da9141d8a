//! Parallel versions of the table scans. Output order is fixed by `(m, p)`
//! regardless of scheduling.

use quasinv_core::charp::{anomaly_cell, lowest_q_degree, AnomalyCell, CharpError};
use quasinv_core::exact::primes_up_to;
use rayon::prelude::*;

pub fn anomaly_scan(n: usize, m_max: u32, p_max: u64, full_series: bool) -> Result<Vec<AnomalyCell>, CharpError> {
    let lowest_q: Vec<u32> = (0..=m_max)
        .into_par_iter()
        .map(|m| lowest_q_degree(n, m))
        .collect::<Result<_, _>>()?;
    let primes = primes_up_to(p_max);
    let cells: Vec<(u32, u64)> = (0..=m_max).flat_map(|m| primes.iter().map(move |&p| (m, p))).collect();
    cells
        .par_iter()
        .map(|&(m, p)| anomaly_cell(n, m, p, lowest_q[m as usize], full_series))
        .collect()
}
