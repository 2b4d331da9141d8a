//! Serializable records and their text, CSV and JSON renderings.

use std::fmt::Write;

use quasinv_core::charp::{AnomalyCell, Witness};
use quasinv_core::exact::FieldKind;
use quasinv_core::hilbert::{format_t_poly, Check, Numerator, SeriesPrefix, StructureReport};
use serde::{Deserialize, Serialize};

/// `{"n", "m", "field", "coeffs", "stabilized"}`; `stabilized` is absent
/// for plain series prefixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub n: usize,
    pub m: u32,
    pub field: String,
    pub coeffs: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilized: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<ChecksRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksRecord {
    pub top_degree: bool,
    pub palindromic: bool,
    pub rank: bool,
    pub nonneg: bool,
}

impl SeriesRecord {
    pub fn from_prefix(h: &SeriesPrefix) -> Self {
        SeriesRecord {
            n: h.n,
            m: h.m,
            field: h.field.to_string(),
            coeffs: h.coeffs.iter().map(|&c| c as i64).collect(),
            stabilized: None,
            checks: None,
        }
    }

    pub fn from_numerator(g: &Numerator, report: Option<&StructureReport>) -> Self {
        SeriesRecord {
            n: g.n,
            m: g.m,
            field: g.field.to_string(),
            coeffs: g.coeffs.clone(),
            stabilized: Some(g.stabilized),
            checks: report.map(|r| ChecksRecord {
                top_degree: r.top_degree.passed(),
                palindromic: r.palindromic.passed(),
                rank: r.rank.passed(),
                nonneg: r.nonneg.passed(),
            }),
        }
    }

    pub fn field_kind(&self) -> Option<FieldKind> {
        self.field.parse().ok()
    }
}

pub fn list_line<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn indexed_csv<T: ToString>(header: &str, v: &[T]) -> String {
    let mut out = format!("degree,{header}\n");
    for (d, c) in v.iter().enumerate() {
        let _ = writeln!(out, "{d},{}", c.to_string());
    }
    out
}

fn check_text<T: std::fmt::Debug>(name: &str, c: &Check<T>) -> String {
    match c {
        Check::Pass => format!("{name}: true"),
        Check::Fail(v) => format!("{name}: false ({v:?})"),
    }
}

pub fn numerator_text(g: &Numerator, report: Option<&StructureReport>) -> String {
    let mut out = format!("{}\nstabilized: {}\n", format_t_poly(&g.coeffs), g.stabilized);
    match report {
        Some(r) => {
            for line in [
                check_text("top_degree", &r.top_degree),
                check_text("palindromic", &r.palindromic),
                check_text("rank", &r.rank),
                check_text("nonneg", &r.nonneg),
            ] {
                out.push_str(&line);
                out.push('\n');
            }
        }
        None => out.push_str("checks: unavailable\n"),
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub a: u32,
    pub k: u32,
    pub two_b: i64,
    pub construction_degree: u64,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord {
            a: w.a,
            k: w.k,
            two_b: w.two_b,
            construction_degree: w.construction_degree(),
        }
    }
}

impl WitnessRecord {
    pub fn text(&self) -> String {
        format!("a={} k={} two_b={} degree={}", self.a, self.k, self.two_b, self.construction_degree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub m: u32,
    pub p: u64,
    pub anomalous: bool,
    /// Lowest-degree witness, the labelling used in tables.
    pub witness: Option<WitnessRecord>,
    /// Lexicographically smallest witness.
    pub search_witness: Option<WitnessRecord>,
    pub lowest_nonsym_degree_fp: u32,
    pub lowest_nonsym_degree_q: u32,
    pub construction_degree: Option<u32>,
    pub fallback_used: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_differs: Option<bool>,
}

impl From<&AnomalyCell> for CellRecord {
    fn from(c: &AnomalyCell) -> Self {
        CellRecord {
            m: c.m,
            p: c.p,
            anomalous: c.anomalous,
            witness: c.table_witness.as_ref().map(WitnessRecord::from),
            search_witness: c.witness.as_ref().map(WitnessRecord::from),
            lowest_nonsym_degree_fp: c.lowest_fp,
            lowest_nonsym_degree_q: c.lowest_q,
            construction_degree: c.construction_degree,
            fallback_used: c.fallback_used,
            series_differs: c.series_differs,
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn cells_csv(cells: &[CellRecord], full_series: bool) -> String {
    let mut out = String::from(
        "m,p,anomalous,witness_a,witness_k,lowest_nonsym_degree_fp,lowest_nonsym_degree_q,fallback_used,\
         search_a,search_k,construction_degree",
    );
    if full_series {
        out.push_str(",series_differs");
    }
    out.push('\n');
    for c in cells {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.m,
            c.p,
            c.anomalous,
            opt(c.witness.as_ref().map(|w| w.a)),
            opt(c.witness.as_ref().map(|w| w.k)),
            c.lowest_nonsym_degree_fp,
            c.lowest_nonsym_degree_q,
            opt(c.fallback_used),
            opt(c.search_witness.as_ref().map(|w| w.a)),
            opt(c.search_witness.as_ref().map(|w| w.k)),
            opt(c.construction_degree),
        );
        if full_series {
            let _ = write!(out, ",{}", opt(c.series_differs));
        }
        out.push('\n');
    }
    out
}

/// Grid with one row per `m` and one column per prime; anomalous cells show
/// `a,k` of the table witness, others `.`.
pub fn cells_grid(cells: &[CellRecord]) -> String {
    let mut primes: Vec<u64> = cells.iter().map(|c| c.p).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut ms: Vec<u32> = cells.iter().map(|c| c.m).collect();
    ms.sort_unstable();
    ms.dedup();
    let label = |c: &CellRecord| -> String {
        match (&c.witness, c.anomalous) {
            (Some(w), true) => format!("{},{}", w.a, w.k),
            (None, true) => "?".to_string(),
            (Some(_), false) => "!".to_string(),
            (None, false) => ".".to_string(),
        }
    };
    let width = cells.iter().map(|c| label(c).len()).chain(primes.iter().map(|p| p.to_string().len())).max().unwrap_or(1);
    let mut out = format!("{:>4}", "m\\p");
    for p in &primes {
        let _ = write!(out, " {p:>width$}");
    }
    out.push('\n');
    for m in &ms {
        let _ = write!(out, "{m:>4}");
        for p in &primes {
            let l = cells
                .iter()
                .find(|c| c.m == *m && c.p == *p)
                .map(label)
                .unwrap_or_default();
            let _ = write!(out, " {l:>width$}");
        }
        out.push('\n');
    }
    out
}
