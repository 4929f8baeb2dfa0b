//! `lvmean` command-line front end.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lvmean::meanvalues::{self as mv, special};
use lvmean::oracle::Query;
use lvmean::suites::{self, Suite, SuiteOptions};
use lvmean::{ComplexApprox, PiValue};
use serde::Serialize;
use serde_json::value::RawValue;

/// Significant digits of the rendered decimals.
const DIGITS: usize = 15;

#[derive(Parser, Debug)]
#[command(
    name = "lvmean",
    version,
    about = "Exact mean values of products of Dirichlet L-functions"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed form of V2(q; m, n; a, b)
    V2(V2Args),
    /// Closed form of V3(q; m1, m2, m3; a, b, c)
    V3(V3Args),
    /// Brute-force character-sum value
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Tabulate a totient-form specialization over a range of moduli
    Table(TableArgs),
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    V2(V2Args),
    V3(V3Args),
}

#[derive(Args, Debug, Clone, Copy)]
struct V2Args {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    a: u64,
    #[arg(long, default_value_t = 1)]
    b: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct V3Args {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m1: u32,
    #[arg(long)]
    m2: u32,
    #[arg(long)]
    m3: u32,
    #[arg(long, default_value_t = 1)]
    a: u64,
    #[arg(long, default_value_t = 1)]
    b: u64,
    #[arg(long, default_value_t = 1)]
    c: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    qmax: Option<u64>,
    #[arg(long)]
    mmax: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = SuiteOptions::default().seed)]
    seed: u64,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: lvmean::Error| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Formula {
    #[value(name = "eq1.6")]
    V2Order11,
    #[value(name = "eq1.10")]
    V3Order112,
    #[value(name = "eq2.12")]
    V2Order22,
    #[value(name = "eq2.13")]
    V2Order33,
    #[value(name = "eq2.18")]
    V3Order114,
    #[value(name = "eq2.22")]
    V3Order123,
    #[value(name = "eq2.23")]
    V3Order125,
}

impl Formula {
    fn eval(self, q: u64) -> lvmean::Result<PiValue> {
        match self {
            Formula::V2Order11 => special::v2_11(q),
            Formula::V3Order112 => special::v3_112(q),
            Formula::V2Order22 => special::v2_22(q),
            Formula::V2Order33 => special::v2_33(q),
            Formula::V3Order114 => special::v3_114(q),
            Formula::V3Order123 => special::v3_123(q),
            Formula::V3Order125 => special::v3_125(q),
        }
    }
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum)]
    formula: Formula,
    #[arg(long)]
    q_from: u64,
    #[arg(long)]
    q_to: u64,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<lvmean::Error> for Failure {
    fn from(e: lvmean::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(2),
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    match &cli.command {
        Command::V2(a) => {
            let value = mv::v2_closed(a.q, a.m, a.n, a.a, a.b)?;
            let query = Query::V2 {
                q: a.q,
                m: a.m,
                n: a.n,
                a: a.a,
                b: a.b,
            };
            emit_value(cli.format, out, &query, &value)
        }
        Command::V3(a) => {
            let value = mv::v3_closed(a.q, a.m1, a.m2, a.m3, a.a, a.b, a.c)?;
            let query = Query::V3 {
                q: a.q,
                m1: a.m1,
                m2: a.m2,
                m3: a.m3,
                a: a.a,
                b: a.b,
                c: a.c,
            };
            emit_value(cli.format, out, &query, &value)
        }
        Command::Oracle(which) => {
            let query = match *which {
                OracleCommand::V2(a) => Query::V2 {
                    q: a.q,
                    m: a.m,
                    n: a.n,
                    a: a.a,
                    b: a.b,
                },
                OracleCommand::V3(a) => Query::V3 {
                    q: a.q,
                    m1: a.m1,
                    m2: a.m2,
                    m3: a.m3,
                    a: a.a,
                    b: a.b,
                    c: a.c,
                },
            };
            let value = query.oracle()?;
            emit_oracle(cli.format, out, &query, &value)
        }
        Command::Verify(a) => {
            let opts = SuiteOptions {
                qmax: a.qmax,
                mmax: a.mmax,
                tol: a.tol,
                seed: a.seed,
            };
            let reports = suites::run(a.suite, &opts)?;
            emit_verify(cli.format, out, &reports)?;
            if reports.iter().all(|r| r.all_passed()) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Table(a) => {
            if a.q_from > a.q_to {
                return Err(Failure::Usage(format!(
                    "--q-from {} exceeds --q-to {}",
                    a.q_from, a.q_to
                )));
            }
            let rows = (a.q_from..=a.q_to)
                .map(|q| Ok((q, a.formula.eval(q)?)))
                .collect::<lvmean::Result<Vec<_>>>()?;
            emit_table(cli.format, out, &rows)
        }
    }
}

fn decimal(v: &PiValue) -> String {
    v.decimal(DIGITS).positional()
}

fn raw_decimal(v: &PiValue) -> Box<RawValue> {
    RawValue::from_string(decimal(v)).expect("decimal renders as a JSON number")
}

#[derive(Serialize)]
struct ValueRecord {
    pi_power: u32,
    coeff: String,
    decimal: Box<RawValue>,
}

impl ValueRecord {
    fn new(v: &PiValue) -> Self {
        ValueRecord {
            pi_power: v.pi_power,
            coeff: v.coeff_string(),
            decimal: raw_decimal(v),
        }
    }
}

fn query_fields(query: &Query) -> (Vec<&'static str>, Vec<String>) {
    match *query {
        Query::V2 { q, m, n, a, b } => (
            vec!["q", "m", "n", "a", "b"],
            [q, m.into(), n.into(), a, b]
                .iter()
                .map(u64::to_string)
                .collect(),
        ),
        Query::V3 {
            q,
            m1,
            m2,
            m3,
            a,
            b,
            c,
        } => (
            vec!["q", "m1", "m2", "m3", "a", "b", "c"],
            [q, m1.into(), m2.into(), m3.into(), a, b, c]
                .iter()
                .map(u64::to_string)
                .collect(),
        ),
    }
}

fn csv_writer(out: &mut impl Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out as &mut dyn Write)
}

fn emit_value(
    format: Format,
    out: &mut impl Write,
    query: &Query,
    v: &PiValue,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &ValueRecord::new(v))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let (mut header, mut row) = query_fields(query);
            header.extend(["pi_power", "coeff", "decimal"]);
            row.extend([v.pi_power.to_string(), v.coeff_string(), decimal(v)]);
            let mut w = csv_writer(out);
            w.write_record(&header)?;
            w.write_record(&row)?;
            w.flush()?;
        }
        Format::Text => writeln!(out, "{query} = {v} ≈ {}", decimal(v))?,
    }
    Ok(())
}

fn emit_oracle(
    format: Format,
    out: &mut impl Write,
    query: &Query,
    v: &ComplexApprox,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, v)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let (mut header, mut row) = query_fields(query);
            header.extend(["re", "im", "err"]);
            row.extend([v.re, v.im, v.err].iter().map(|x| format!("{x:e}")));
            let mut w = csv_writer(out);
            w.write_record(&header)?;
            w.write_record(&row)?;
            w.flush()?;
        }
        Format::Text => writeln!(
            out,
            "{query} ≈ {:.15e} {:+.3e}i (error bound {:.3e})",
            v.re, v.im, v.err
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct CaseRecord<'a> {
    suite: &'a str,
    case: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi_power: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<Box<RawValue>>,
    verdict: &'static str,
    detail: &'a str,
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn emit_verify(
    format: Format,
    out: &mut impl Write,
    reports: &[suites::SuiteReport],
) -> Result<(), Failure> {
    let cases = reports.iter().flat_map(|r| r.cases.iter());
    match format {
        Format::Json => {
            let records: Vec<CaseRecord> = cases
                .map(|c| CaseRecord {
                    suite: c.suite.name(),
                    case: &c.case,
                    pi_power: c.value.as_ref().map(|v| v.pi_power),
                    coeff: c.value.as_ref().map(PiValue::coeff_string),
                    decimal: c.value.as_ref().map(raw_decimal),
                    verdict: verdict(c.pass),
                    detail: &c.detail,
                })
                .collect();
            serde_json::to_writer(&mut *out, &records)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["suite", "case", "pi_power", "coeff", "decimal", "verdict"])?;
            for c in cases {
                let (p, co, d) = match &c.value {
                    Some(v) => (v.pi_power.to_string(), v.coeff_string(), decimal(v)),
                    None => Default::default(),
                };
                w.write_record([c.suite.name(), &c.case, &p, &co, &d, verdict(c.pass)])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in cases {
                writeln!(
                    out,
                    "{} {} {}: {}",
                    verdict(c.pass),
                    c.suite,
                    c.case,
                    c.detail
                )?;
            }
            for r in reports {
                writeln!(
                    out,
                    "{}: {} passed, {} failed",
                    r.suite,
                    r.passed(),
                    r.failed()
                )?;
            }
        }
    }
    Ok(())
}

fn emit_table(
    format: Format,
    out: &mut impl Write,
    rows: &[(u64, PiValue)],
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                q: u64,
                pi_power: u32,
                coeff: String,
                decimal: Box<RawValue>,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|(q, v)| {
                    let r = ValueRecord::new(v);
                    Row {
                        q: *q,
                        pi_power: r.pi_power,
                        coeff: r.coeff,
                        decimal: r.decimal,
                    }
                })
                .collect();
            serde_json::to_writer(&mut *out, &rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["q", "pi_power", "coeff", "decimal"])?;
            for (q, v) in rows {
                w.write_record([
                    q.to_string(),
                    v.pi_power.to_string(),
                    v.coeff_string(),
                    decimal(v),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            let coeff_width = rows
                .iter()
                .map(|(_, v)| v.coeff_string().len())
                .max()
                .unwrap_or(5)
                .max(5);
            writeln!(
                out,
                "{:>6}  {:>8}  {:>coeff_width$}  decimal",
                "q", "pi_power", "coeff"
            )?;
            for (q, v) in rows {
                writeln!(
                    out,
                    "{q:>6}  {:>8}  {:>coeff_width$}  {}",
                    v.pi_power,
                    v.coeff_string(),
                    decimal(v)
                )?;
            }
        }
    }
    Ok(())
}
