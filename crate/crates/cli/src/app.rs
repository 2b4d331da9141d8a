//! Command-line interface. [`run`] never exits the process, so it can be
//! driven from tests; `main` only prints and sets the exit code.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use quasinv_core::charp::{
    construct_low_degree, minimal_witness, witness_search, CharpError, Witness,
};
use quasinv_core::exact::{FieldKind, PrimeField, Rationals};
use quasinv_core::hilbert::{
    felder_veselov, format_t_poly, numerator_from_prefix, required_d_max, series_prefix, structure_checks,
    HilbertError, SeriesPrefix,
};
use quasinv_core::quasi::{is_quasi_invariant, QuasiError};
use quasinv_core::twisted::{
    diagonal_divisibility_check, is_twisted_member, is_twisted_member_multi, q_membership, twist_generator,
    twisted_dims, twisted_series, TwistError, TwistSpec,
};
use serde::Serialize;

use crate::parse::{parse_int_list, parse_param_poly, parse_poly, parse_rational, parse_twist, ParseError};
use crate::report::{
    cells_csv, cells_grid, indexed_csv, list_line, numerator_text, CellRecord, SeriesRecord, WitnessRecord,
};
use crate::scan::anomaly_scan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "quasinv", version, about = "Quasi-invariant polynomials of the symmetric group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions of the degree slices of Q_m(n).
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "q")]
        field: FieldKind,
        #[arg(long)]
        max_degree: u32,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Hilbert numerator with structural checks.
    Numerator {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "q")]
        field: FieldKind,
        /// Defaults to the smallest prefix that can detect stabilization.
        #[arg(long)]
        max_degree: Option<u32>,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Characteristic-zero numerator from the Young diagram formula.
    Fv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Witnesses (a, k) of the prime-power inequality.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Builds and verifies the low-degree quasi-invariant over F_p.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "minimal")]
        choice: WitnessChoice,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Scans (m, p) cells for primes with a larger Hilbert series.
    Anomalies {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        p_max: u64,
        /// Also compare full series prefixes over F_p and Q.
        #[arg(long)]
        full_series: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Tests m-quasi-invariance of a polynomial read from a file.
    Member {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "q")]
        field: FieldKind,
        #[arg(long)]
        file: PathBuf,
        /// Number of variables; defaults to the largest index used.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Twisted quasi-invariants.
    Twisted {
        #[command(subcommand)]
        command: TwistedCommand,
    },
    /// q-deformed quasi-invariants.
    Qdef {
        #[command(subcommand)]
        command: QdefCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessChoice {
    /// Lowest construction degree.
    Minimal,
    /// Lexicographically smallest (a, k).
    Search,
}

#[derive(Debug, Subcommand)]
enum TwistedCommand {
    /// Closed-form Hilbert numerator over (1-t)(1-t^2).
    Series {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Also expand the series through this degree.
        #[arg(long)]
        max_degree: Option<u32>,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Dimensions computed from the linear conditions.
    Dims {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        max_degree: u32,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// The generator P_m and its verification.
    Pm {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Membership of a polynomial read from a file; pass one twist for two
    /// variables or one per variable.
    Member {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true, required = true)]
        f: Vec<String>,
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        fmt: FormatArg,
    },
}

#[derive(Debug, Subcommand)]
enum QdefCommand {
    /// Membership in the q-deformed space.
    Member {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        file: PathBuf,
        /// Monomial twist exponents a_1,...,a_n.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        fmt: FormatArg,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    /// Bad flags, unreadable input, or parameters outside the domain.
    Usage(String),
    /// A verified assertion did not hold.
    Assertion(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CharpError> for Failure {
    fn from(e: CharpError) -> Self {
        match e {
            CharpError::InvalidParams(_) => Failure::Usage(e.to_string()),
            _ => Failure::Assertion(e.to_string()),
        }
    }
}

impl From<HilbertError> for Failure {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::PrefixTooShort { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Assertion(e.to_string()),
        }
    }
}

impl From<QuasiError> for Failure {
    fn from(e: QuasiError) -> Self {
        Failure::Assertion(e.to_string())
    }
}

impl From<TwistError> for Failure {
    fn from(e: TwistError) -> Self {
        match e {
            TwistError::NotMember(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    outcome(dispatch(cli.command))
}

fn outcome(result: Result<String, Failure>) -> Outcome {
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Assertion(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("verification failed: {msg}\n"),
        },
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn line(s: impl AsRef<str>) -> String {
    format!("{}\n", s.as_ref())
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n == 0 {
        Err(Failure::Usage("n must be positive".into()))
    } else {
        Ok(())
    }
}

fn prefix(field: FieldKind, n: usize, m: u32, d_max: u32) -> Result<SeriesPrefix, Failure> {
    Ok(match field {
        FieldKind::Rationals => series_prefix(&Rationals, n, m, d_max)?,
        FieldKind::Prime(p) => {
            let f = PrimeField::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
            series_prefix(&f, n, m, d_max)?
        }
    })
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn bool_output(fmt: Format, key: &str, value: bool) -> String {
    match fmt {
        Format::Text => line(value.to_string()),
        Format::Csv => format!("{key}\n{value}\n"),
        Format::Json => json(&serde_json::json!({ key: value })),
    }
}

fn dispatch(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Dims { n, m, field, max_degree, fmt } => {
            check_n(n)?;
            let h = prefix(field, n, m, max_degree)?;
            Ok(match fmt.format {
                Format::Text => line(list_line(&h.coeffs)),
                Format::Csv => indexed_csv("dim", &h.coeffs),
                Format::Json => json(&SeriesRecord::from_prefix(&h)),
            })
        }
        Command::Numerator { n, m, field, max_degree, fmt } => {
            check_n(n)?;
            let h = prefix(field, n, m, max_degree.unwrap_or_else(|| required_d_max(n, m)))?;
            let g = numerator_from_prefix(&h)?;
            let report = if g.stabilized { Some(structure_checks(&g, n, m)?) } else { None };
            Ok(match fmt.format {
                Format::Text => numerator_text(&g, report.as_ref()),
                Format::Csv => indexed_csv("coeff", &g.coeffs),
                Format::Json => json(&SeriesRecord::from_numerator(&g, report.as_ref())),
            })
        }
        Command::Fv { n, m, fmt } => {
            check_n(n)?;
            let g = felder_veselov(n, m)?;
            Ok(match fmt.format {
                Format::Text => line(format_t_poly(&g.coeffs)),
                Format::Csv => indexed_csv("coeff", &g.coeffs),
                Format::Json => json(&SeriesRecord::from_numerator(&g, None)),
            })
        }
        Command::Witness { n, m, p, fmt } => {
            let search = witness_search(m, n, p)?.as_ref().map(WitnessRecord::from);
            let minimal = minimal_witness(m, n, p)?.as_ref().map(WitnessRecord::from);
            Ok(match fmt.format {
                Format::Text => {
                    let show = |w: &Option<WitnessRecord>| w.as_ref().map(WitnessRecord::text).unwrap_or("none".into());
                    format!("search: {}\nminimal: {}\n", show(&search), show(&minimal))
                }
                Format::Csv => {
                    let mut out = String::from("kind,a,k,two_b,construction_degree\n");
                    for (kind, w) in [("search", &search), ("minimal", &minimal)] {
                        if let Some(w) = w {
                            out.push_str(&format!("{kind},{},{},{},{}\n", w.a, w.k, w.two_b, w.construction_degree));
                        }
                    }
                    out
                }
                Format::Json => json(&serde_json::json!({
                    "n": n, "m": m, "p": p, "search": search, "minimal": minimal,
                })),
            })
        }
        Command::Construct { n, m, p, choice, fmt } => {
            let w: Option<Witness> = match choice {
                WitnessChoice::Minimal => minimal_witness(m, n, p)?,
                WitnessChoice::Search => witness_search(m, n, p)?,
            };
            let Some(w) = w else {
                return Ok(match fmt.format {
                    Format::Text => line("witness: none"),
                    Format::Csv => String::from("a,k,two_b,degree,fallback_used,quasi_invariant,symmetric,poly\n"),
                    Format::Json => json(&serde_json::json!({ "n": n, "m": m, "p": p, "witness": null })),
                });
            };
            let c = construct_low_degree(&w)?;
            // construct_low_degree already rejects failures; these are reported
            let qi = is_quasi_invariant(&c.poly, m);
            let sym = c.poly.is_symmetric();
            let rec = WitnessRecord::from(&w);
            Ok(match fmt.format {
                Format::Text => format!(
                    "witness: {}\ndegree: {}\nfallback_used: {}\nquasi_invariant: {qi}\nsymmetric: {sym}\np_k: {}\npoly: {}\n",
                    rec.text(),
                    c.degree,
                    c.fallback_used,
                    c.p_k,
                    c.poly
                ),
                Format::Csv => format!(
                    "a,k,two_b,degree,fallback_used,quasi_invariant,symmetric,poly\n{},{},{},{},{},{qi},{sym},{}\n",
                    w.a, w.k, w.two_b, c.degree, c.fallback_used, c.poly
                ),
                Format::Json => json(&serde_json::json!({
                    "n": n, "m": m, "p": p, "witness": rec, "degree": c.degree,
                    "fallback_used": c.fallback_used, "quasi_invariant": qi, "symmetric": sym,
                    "p_k": c.p_k.to_string(), "poly": c.poly.to_string(),
                })),
            })
        }
        Command::Anomalies { n, m_max, p_max, full_series, format } => {
            let cells = anomaly_scan(n, m_max, p_max, full_series)?;
            let records: Vec<CellRecord> = cells.iter().map(CellRecord::from).collect();
            Ok(match format {
                Format::Text => cells_grid(&records),
                Format::Csv => cells_csv(&records, full_series),
                Format::Json => json(&records),
            })
        }
        Command::Member { m, field, file, n, fmt } => {
            let f = parse_poly(&read_file(&file)?, n)?;
            let member = match field {
                FieldKind::Rationals => is_quasi_invariant(&f, m),
                FieldKind::Prime(p) => {
                    let fp = PrimeField::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
                    let g = f
                        .map_coeffs(fp, |c| quasinv_core::exact::Field::from_rational(&fp, c))
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    is_quasi_invariant(&g, m)
                }
            };
            Ok(bool_output(fmt.format, "member", member))
        }
        Command::Twisted { command } => twisted(command),
        Command::Qdef { command } => match command {
            QdefCommand::Member { m, q, file, twist, n, fmt } => {
                let q: BigRational = parse_rational(&q)?;
                let f = parse_poly(&read_file(&file)?, n)?;
                let a = twist.as_deref().map(parse_int_list).transpose()?;
                let member = q_membership(&f, m, &q, a.as_deref())?;
                Ok(bool_output(fmt.format, "member", member))
            }
        },
    }
}

#[derive(Serialize)]
struct TwistedSeriesRecord {
    m: u32,
    twist: String,
    coeffs: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<Vec<i64>>,
}

fn twisted(cmd: TwistedCommand) -> Result<String, Failure> {
    match cmd {
        TwistedCommand::Series { m, f, max_degree, fmt } => {
            let t = parse_twist(&f)?;
            let s = twisted_series(m, &t);
            let series = max_degree.map(|d| s.expand(d));
            Ok(match fmt.format {
                Format::Text => {
                    let mut out = line(s.to_string());
                    if let Some(v) = &series {
                        out.push_str(&line(format!("series: {}", list_line(v))));
                    }
                    out
                }
                Format::Csv => indexed_csv("coeff", &s.numerator),
                Format::Json => json(&TwistedSeriesRecord {
                    m,
                    twist: t.to_string(),
                    coeffs: s.numerator.clone(),
                    series,
                }),
            })
        }
        TwistedCommand::Dims { m, f, max_degree, fmt } => {
            let t = parse_twist(&f)?;
            let dims = twisted_dims(m, max_degree, &t)?;
            Ok(match fmt.format {
                Format::Text => line(list_line(&dims)),
                Format::Csv => indexed_csv("dim", &dims),
                Format::Json => json(&serde_json::json!({ "m": m, "twist": t.to_string(), "dims": dims })),
            })
        }
        TwistedCommand::Pm { m, f, fmt } => {
            let t = parse_twist(&f)?;
            let p = twist_generator(m, &t)?;
            let member = is_twisted_member(&p, m, &t)?;
            let divisible = diagonal_divisibility_check(&p, m, &t);
            if !member || !divisible {
                return Err(Failure::Assertion(format!(
                    "generator {p} fails: member = {member}, diagonal divisible = {divisible}"
                )));
            }
            Ok(match fmt.format {
                Format::Text => format!("{p}\nmember: {member}\ndiagonal_divisible: {divisible}\n"),
                Format::Csv => format!("poly,member,diagonal_divisible\n{p},{member},{divisible}\n"),
                Format::Json => json(&serde_json::json!({
                    "m": m, "twist": t.to_string(), "poly": p.to_string(),
                    "member": member, "diagonal_divisible": divisible,
                })),
            })
        }
        TwistedCommand::Member { m, f, file, fmt } => {
            let twists: Vec<TwistSpec> = f.iter().map(|s| parse_twist(s)).collect::<Result<_, _>>()?;
            let text = read_file(&file)?;
            let member = if twists.len() == 1 {
                let p = parse_param_poly(&text, Some(2))?;
                is_twisted_member(&p, m, &twists[0])?
            } else {
                let p = parse_param_poly(&text, Some(twists.len()))?;
                is_twisted_member_multi(&p, m, &twists)?
            };
            Ok(bool_output(fmt.format, "member", member))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_exit_codes() {
        let cap = CharpError::CapExceeded { n: 3, m: 1, p: 3, cap: 4 };
        let o = outcome(Err(cap.into()));
        assert_eq!(o.code, 2);
        assert!(o.stderr.starts_with("verification failed: "));
        let o = outcome(Err(CharpError::InvalidParams("p = 4".into()).into()));
        assert_eq!(o.code, 1);
        assert!(o.stderr.starts_with("error: "));
        let o = outcome(Err(TwistError::NotMember("f".into()).into()));
        assert_eq!(o.code, 2);
        assert_eq!(outcome(Ok("x\n".into())).code, 0);
    }
}
