//! Command-line front end for the certification library.

mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thetacn::arith::{class_of, factor, MAX_INPUT};
use thetacn::criteria::{classify, conjecture_report, verify_report, ClassificationRecord};
use thetacn::descent::{selmer, Curve, Theta};
use thetacn::graph::{build_unified, GraphError};
use thetacn::witness::search_point;

const EXIT_OK: u8 = 0;
const EXIT_DISAGREEMENT: u8 = 1;
const EXIT_OUT_OF_SCOPE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "thetacn",
    version,
    about = "Certify odd square-free integers as non-theta-congruent and non-tiling \
             by explicit 2-descent, cross-checked against residue-graph rules"
)]
struct Cli {
    /// Output format (dot applies to the graph command only)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for range scans; 0 picks the machine default. Affects
    /// wall time only: rows are always emitted in ascending n.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaArg {
    /// Theta = pi/3
    #[value(name = "pi3")]
    Pi3,
    /// Theta = 2*pi/3
    #[value(name = "2pi3")]
    TwoPi3,
}

impl From<ThetaArg> for Theta {
    fn from(arg: ThetaArg) -> Theta {
        match arg {
            ThetaArg::Pi3 => Theta::PiThird,
            ThetaArg::TwoPi3 => Theta::TwoPiThird,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify one n: descents on both curves, certificates, rule verdicts
    Classify { n: u64 },
    /// Classify every odd square-free n in [lo, hi], one row per value
    Scan {
        lo: u64,
        hi: u64,
        /// Keep only rows where at least one certificate holds
        #[arg(long)]
        only_certified: bool,
    },
    /// Inspect the residue graph of a nonzero square-free integer m
    Graph { m: i128 },
    /// Dump S' and S for one curve
    Selmer { n: u64, theta: ThetaArg },
    /// Check every rule against the descent over [lo, hi]
    Verify { lo: u64, hi: u64 },
    /// Search one curve for a rational point of bounded height
    SearchPoint {
        n: u64,
        theta: ThetaArg,
        /// Denominator height bound (at least 1)
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        height: u64,
    },
}

/// A failed run: usage problems exit 64, out-of-scope inputs exit 2.
enum Failure {
    Usage(String),
    Input(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_OUT_OF_SCOPE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { n } => cmd_classify(n, cli.format),
        Command::Scan { lo, hi, only_certified } => {
            cmd_scan(lo, hi, only_certified, cli.format, cli.jobs)
        }
        Command::Graph { m } => cmd_graph(m, cli.format),
        Command::Selmer { n, theta } => cmd_selmer(n, theta.into(), cli.format),
        Command::Verify { lo, hi } => cmd_verify(lo, hi, cli.format),
        Command::SearchPoint { n, theta, height } => {
            cmd_search(n, theta.into(), height, cli.format)
        }
    }
}

fn require_format(format: Format, allowed: &[Format], command: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "the {command} command does not support the requested output format"
        )))
    }
}

fn cmd_classify(n: u64, format: Format) -> Result<u8, Failure> {
    require_format(format, &[Format::Text, Format::Json, Format::Csv], "classify")?;
    let record = classify(n).map_err(|e| Failure::Input(e.to_string()))?;
    match format {
        Format::Text => print!("{}", output::record_text(&record)),
        Format::Json => print!("{}", output::render_json(&output::record_json(&record))),
        Format::Csv => {
            println!("{}", output::CSV_HEADER);
            println!("{}", output::record_csv_row(&record));
        }
        Format::Dot => unreachable!("rejected above"),
    }
    Ok(EXIT_OK)
}

fn any_certificate(record: &ClassificationRecord) -> bool {
    record.non_pi3_cn.is_certified()
        || record.non_2pi3_cn.is_certified()
        || record.non_tn.is_certified()
}

fn scan_records(lo: u64, hi: u64, jobs: usize) -> Result<Vec<ClassificationRecord>, Failure> {
    let ns: Vec<u64> = (lo.max(5)..=hi).filter(|n| n % 2 == 1).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Input(format!("could not start the worker pool: {e}")))?;
    // Indexed parallel collect keeps ascending-n order regardless of the
    // thread count, so output bytes never depend on --jobs.
    Ok(pool.install(|| ns.par_iter().filter_map(|&n| classify(n).ok()).collect()))
}

fn cmd_scan(
    lo: u64,
    hi: u64,
    only_certified: bool,
    format: Format,
    jobs: usize,
) -> Result<u8, Failure> {
    require_format(format, &[Format::Text, Format::Json, Format::Csv], "scan")?;
    let mut records = scan_records(lo, hi, jobs)?;
    if only_certified {
        records.retain(any_certificate);
    }
    match format {
        Format::Text => {
            if !records.is_empty() {
                println!("{}", output::scan_text_header());
                for record in &records {
                    println!("{}", output::scan_text_row(record));
                }
            }
        }
        Format::Csv => {
            if !records.is_empty() {
                println!("{}", output::CSV_HEADER);
                for record in &records {
                    println!("{}", output::record_csv_row(record));
                }
            }
        }
        Format::Json => {
            let rows = serde_json::Value::Array(records.iter().map(output::record_json).collect());
            print!("{}", output::render_json(&rows));
        }
        Format::Dot => unreachable!("rejected above"),
    }
    Ok(EXIT_OK)
}

fn cmd_graph(m: i128, format: Format) -> Result<u8, Failure> {
    require_format(format, &[Format::Text, Format::Json, Format::Dot], "graph")?;
    if m == 0 {
        return Err(Failure::Input("the graph of 0 is undefined; pass a nonzero square-free integer".into()));
    }
    if m.unsigned_abs() >= MAX_INPUT as u128 {
        return Err(Failure::Input(format!("|m| must be below 2^62, got {m}")));
    }
    for (p, e) in factor(m.unsigned_abs() as u64) {
        if e > 1 {
            return Err(Failure::Input(format!("m = {m} is not square-free ({p}^{e} divides it)")));
        }
    }
    let class = class_of(m).expect("m is nonzero and within bounds");
    let graph = build_unified(&class).map_err(|e| match e {
        GraphError::EmptyVertexSet => {
            Failure::Input("m = 1 yields no vertices; pass a negative or composite-support integer".into())
        }
        other => Failure::Input(other.to_string()),
    })?;
    match format {
        Format::Text => print!("{}", output::graph_text(m, &graph)),
        Format::Json => print!("{}", output::render_json(&output::graph_json(m, &graph))),
        Format::Dot => print!("{}", output::graph_dot(&graph)),
        Format::Csv => unreachable!("rejected above"),
    }
    Ok(EXIT_OK)
}

fn cmd_selmer(n: u64, theta: Theta, format: Format) -> Result<u8, Failure> {
    require_format(format, &[Format::Text, Format::Json], "selmer")?;
    let curve = Curve::new(n, theta).map_err(|e| Failure::Input(e.to_string()))?;
    let report = selmer(&curve);
    match format {
        Format::Text => print!("{}", output::selmer_text(&report)),
        Format::Json => print!("{}", output::render_json(&output::selmer_json(&report))),
        _ => unreachable!("rejected above"),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(lo: u64, hi: u64, format: Format) -> Result<u8, Failure> {
    require_format(format, &[Format::Text, Format::Json], "verify")?;
    let report = verify_report(lo, hi);
    let conjecture = conjecture_report(lo, hi);
    match format {
        Format::Text => print!("{}", output::verify_text(&report, &conjecture)),
        Format::Json => {
            print!("{}", output::render_json(&output::verify_json(&report, &conjecture)))
        }
        _ => unreachable!("rejected above"),
    }
    if report.disagreements.is_empty() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_DISAGREEMENT)
    }
}

fn cmd_search(n: u64, theta: Theta, height: u64, format: Format) -> Result<u8, Failure> {
    require_format(format, &[Format::Text, Format::Json], "search-point")?;
    let curve = Curve::new(n, theta).map_err(|e| Failure::Input(e.to_string()))?;
    // The search is exact in 128-bit arithmetic; refuse bounds that could
    // not be, instead of panicking mid-scan.
    let h = height as i128;
    let exact_bound_ok = h
        .checked_mul(h)
        .and_then(|v| v.checked_mul(3 * n as i128))
        .and_then(|v| v.checked_mul(2))
        .and_then(|v| v.checked_pow(3))
        .is_some();
    if !exact_bound_ok {
        return Err(Failure::Input(format!(
            "height {height} on n = {n} exceeds the exact 128-bit search range; lower the height"
        )));
    }
    let point = search_point(&curve, height);
    match format {
        Format::Text => print!("{}", output::search_text(n, theta, height, point.as_ref())),
        Format::Json => print!(
            "{}",
            output::render_json(&output::search_json(n, theta, height, point.as_ref()))
        ),
        _ => unreachable!("rejected above"),
    }
    Ok(EXIT_OK)
}
