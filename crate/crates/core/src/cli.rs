//! `qform` command line: formulas, counts, verification sweeps, eta-quotient
//! analysis and Bernoulli numbers.

use std::io::Write;
use std::ops::RangeInclusive;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::arith::{bernoulli, gen_bernoulli, CharacterId};
use crate::eisenstein::build_f;
use crate::eta::{check_gamma0_conditions, ligozat_order, CuspLabel, EtaError, EtaQuotient};
use crate::repcount::{brute_count, correction_series, gen_series, x_series, FormSpec};
use crate::solver::{emit_formula, evaluate_formula, verify_identity, CorrectionTable, SolverError, VerifyReport};
use crate::{IntSeries, DEFAULT_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

const MIN_ORDER: i64 = 8;

#[derive(Debug, Parser)]
#[command(name = "qform", version, about = "Exact representation numbers for x1^2+..+xk^2 + m(..)")]
pub struct Cli {
    /// Truncation order (number of q-coefficients kept)
    #[arg(long, global = true, env = "QFORM_ORDER", default_value_t = DEFAULT_ORDER)]
    pub order: i64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Series,
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// (theta(tau) theta(m tau))^k
    Gen,
    /// x_m
    X,
    /// a_{j,k,m}
    A,
    /// F_{k,m}
    F,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the closed-form formula for r(1^k m^k; n)
    Formula {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count representations of n
    Count {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        /// Run every method and fail if they disagree
        #[arg(long)]
        check_all: bool,
    },
    /// Verify the q-series identity for a grid of forms
    Verify {
        /// Single value or range such as 1..8
        #[arg(short, value_parser = parse_range)]
        k: RangeInclusive<u32>,
        /// Comma separated list such as 1,2,4
        #[arg(short, value_delimiter = ',', num_args = 1..)]
        m: Vec<u32>,
    },
    /// Modularity conditions and cusp order of an eta quotient
    #[command(allow_negative_numbers = true)]
    Eta {
        /// Exponents as d:r pairs, e.g. 1:-2,2:3,4:3,8:-2
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        #[arg(long)]
        level: u64,
        /// Cusp a/c with c dividing the level
        #[arg(long)]
        cusp: Option<String>,
    },
    /// Bernoulli number B_k, or B_{k,chi} with --character -4 or -2
    #[command(allow_negative_numbers = true)]
    Bernoulli {
        #[arg(short)]
        k: u32,
        #[arg(long)]
        character: Option<i64>,
    },
    /// Print the first coefficients of a series
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        #[arg(short, default_value_t = 1)]
        k: u32,
        #[arg(short, default_value_t = 2)]
        m: u32,
        #[arg(short, default_value_t = 1)]
        j: u32,
        /// Number of coefficients to print
        #[arg(long, default_value_t = 20)]
        terms: i64,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let range = match s.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let v = parse(s)?;
            v..=v
        }
    };
    if range.is_empty() || *range.start() == 0 {
        return Err(format!("empty or zero-based range {s:?}"));
    }
    Ok(range)
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }
}

type CmdResult = Result<i32, Failure>;

fn form(k: u32, m: u32) -> Result<FormSpec, Failure> {
    FormSpec::new(k, m).map_err(Failure::usage)
}

fn solver_failure(e: SolverError) -> Failure {
    Failure::usage(e)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let order = cli.order;
    if order < MIN_ORDER {
        return Err(Failure::usage(format!("--order must be at least {MIN_ORDER}, got {order}")));
    }
    match &cli.command {
        Command::Formula { k, m, format } => {
            let formula = emit_formula(form(*k, *m)?, order).map_err(solver_failure)?;
            match format {
                Format::Text => writeln!(out, "{formula}"),
                Format::Json => writeln!(out, "{}", formula.to_json()),
            }
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Count { k, m, n, method, check_all } => {
            let spec = form(*k, *m)?;
            let methods: &[Method] =
                if *check_all { &[Method::Formula, Method::Series, Method::Enumerate] } else { std::slice::from_ref(method) };
            let mut values = Vec::new();
            for &method in methods {
                values.push((method, count(spec, *n, method, order)?));
            }
            let first = &values[0].1;
            if let Some((bad, v)) = values.iter().find(|(_, v)| v != first) {
                return Err(Failure::usage(format!(
                    "methods disagree: {:?} gives {first}, {bad:?} gives {v}",
                    values[0].0
                )));
            }
            writeln!(out, "{first}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { k, m } => {
            let mut specs = Vec::new();
            for k in k.clone() {
                for &m in m {
                    specs.push(form(k, m)?);
                }
            }
            let reports = verify_all(&specs, order)?;
            let mut all_ok = true;
            for r in &reports {
                all_ok &= r.ok;
                writeln!(out, "{r}").map_err(io)?;
            }
            let passed = reports.iter().filter(|r| r.ok).count();
            writeln!(out, "{passed}/{} identities verified at order {order}", reports.len()).map_err(io)?;
            Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Eta { spec, level, cusp } => eta(spec, *level, cusp.as_deref(), out),
        Command::Bernoulli { k, character } => {
            let value = match character {
                None => bernoulli(*k),
                Some(d) => {
                    let chi = CharacterId::from_discriminant(*d).map_err(Failure::usage)?;
                    // Both supported characters are odd.
                    if k % 2 == 0 {
                        return Err(Failure::usage(format!(
                            "weight {k} has the wrong parity for the odd character {chi}"
                        )));
                    }
                    gen_bernoulli(*k, chi)
                }
            };
            writeln!(out, "{value}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Series { kind, k, m, j, terms } => {
            let spec = form(*k, *m)?;
            let len = (*terms).max(1);
            let coeffs: Vec<String> = match kind {
                SeriesKind::Gen => int_coeffs(&gen_series(spec, len), len),
                SeriesKind::X => int_coeffs(&x_series(spec.m(), len), len),
                SeriesKind::A => int_coeffs(&correction_series(*j, spec, len), len),
                SeriesKind::F => {
                    let (_, f) = build_f(spec.m(), spec.k(), len).map_err(Failure::usage)?;
                    (0..len).map(|n| f.coefficient(n).expect("within order").to_string()).collect()
                }
            };
            writeln!(out, "{}", coeffs.join(" ")).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn int_coeffs(s: &IntSeries, len: i64) -> Vec<String> {
    (0..len).map(|n| s.coefficient(n).expect("within order").to_string()).collect()
}

fn count(spec: FormSpec, n: u64, method: Method, order: i64) -> Result<BigInt, Failure> {
    match method {
        Method::Enumerate => Ok(brute_count(spec, n)),
        Method::Series => {
            let g: IntSeries = gen_series(spec, n as i64 + 1);
            Ok(g.coefficient(n as i64).expect("within order"))
        }
        Method::Formula => {
            let formula = emit_formula(spec, order).map_err(solver_failure)?;
            let table = CorrectionTable::new(spec, n as i64 + 1);
            evaluate_formula(&formula, n, &table).map_err(solver_failure)
        }
    }
}

/// One thread per spec; results come back in input order.
fn verify_all(specs: &[FormSpec], order: i64) -> Result<Vec<VerifyReport>, Failure> {
    let results: Vec<Result<VerifyReport, SolverError>> = thread::scope(|s| {
        let handles: Vec<_> = specs.iter().map(|&spec| s.spawn(move || verify_identity(spec, order))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    });
    results.into_iter().map(|r| r.map_err(solver_failure)).collect()
}

fn eta(spec: &str, level: u64, cusp: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let f = EtaQuotient::parse(spec, level).map_err(Failure::usage)?;
    let report = check_gamma0_conditions(&f);
    let w = |out: &mut dyn Write, line: String| writeln!(out, "{line}").map_err(io);
    w(out, format!("quotient: {f} on Gamma0({level})"))?;
    w(out, format!("weight: {}", f.weight()))?;
    w(out, format!("sum d*r_d mod 24: {}", report.sum_d_rd_mod24))?;
    w(out, format!("sum (N/d)*r_d mod 24: {}", report.sum_nd_rd_mod24))?;
    w(out, format!("integral weight: {}", report.weight_integral))?;
    w(out, format!("s = prod d^r_d: {}", report.character_s))?;
    match report.character_discriminant {
        Some(d) => w(out, format!("character: ({d}/.)"))?,
        None => w(out, "character: none (half-integral weight)".to_string())?,
    }
    w(out, format!("conditions: {}", if report.passes { "satisfied" } else { "not satisfied" }))?;
    let Some(cusp) = cusp else {
        return Ok(if report.passes { EXIT_OK } else { EXIT_PRECONDITION });
    };
    let cusp = CuspLabel::parse(cusp, level).map_err(Failure::usage)?;
    w(out, format!("cusp: {cusp}"))?;
    w(out, format!("width: {}", cusp.width()))?;
    match ligozat_order(&f, &cusp) {
        Ok(order) => {
            w(out, format!("order: {order}"))?;
            Ok(EXIT_OK)
        }
        Err(EtaError::ConditionsNotMet { .. }) => {
            w(out, "order: withheld".to_string())?;
            Ok(EXIT_PRECONDITION)
        }
        Err(e) => Err(Failure::usage(e)),
    }
}
