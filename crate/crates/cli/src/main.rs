//! `dmetric`: drive the hyperbolic-metric solvers and checks from the shell.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numeric failure (the JSON
//! report on stdout then carries an `error` object and any partial output).

mod commands;
mod mapexpr;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;
use crate::mapexpr::MapExpr;

#[derive(Debug, Parser)]
#[command(name = "dmetric", version, about = "Hyperbolic-valued metric spaces: solvers, axiom checks and demos")]
struct Cli {
    /// Add the canonical view {a1, a2} next to every {u, v} value.
    #[arg(long, global = true)]
    canonical: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Include wall time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a fixed point with one of the contraction solvers.
    Fixedpoint(FixedpointArgs),
    /// Check the metric axioms on random triples.
    CheckMetric(CheckMetricArgs),
    /// Geometry and extreme-value demos.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Banach,
    Inexact,
    Power,
    Contractive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Perturb {
    /// Exact steps: `y_n = T y_{n-1}`.
    Zero,
    /// Every step pushed out by (just under) its full budget.
    Edge,
    /// Like `edge`, alternating the sign.
    Alternating,
}

#[derive(Debug, Args)]
pub struct FixedpointArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// affine:su,ou,sv,ov | clamp-step | quad-contractive | evt-counterexample
    #[arg(long)]
    pub map: MapExpr,
    /// Start point `u,v`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub start: String,
    /// Tolerance, `t` or `u,v`.
    #[arg(long, default_value = "1e-10")]
    pub tol: String,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Power N for `--mode power`.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Grid `lo,hi,n` (n points per axis) for `--mode contractive`.
    #[arg(long, default_value = "0,1,1001", allow_hyphen_values = true)]
    pub grid: String,
    /// Perturbation for `--mode inexact`, budget `eps_n = (1/n^2, 1/n^2)`.
    #[arg(long, value_enum, default_value_t = Perturb::Zero)]
    pub perturb: Perturb,
}

#[derive(Debug, Args)]
pub struct CheckMetricArgs {
    /// canonical | hypmod | product:D1,D2 with D in euclidean, discrete, taxicab, chebyshev
    #[arg(long)]
    pub metric: String,
    /// Number of random points, also the number of random triples.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, env = "DMETRIC_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Ball,
    Evt,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub demo: Demo,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub radius: String,
    #[arg(long, default_value = "0,1,1001", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };

    let started = Instant::now();
    let (name, result) = match &cli.command {
        Command::Fixedpoint(a) => ("fixedpoint", commands::fixedpoint(a)),
        Command::CheckMetric(a) => ("check-metric", commands::check_metric(a)),
        Command::Demo(a) => ("demo", commands::demo(a)),
    };
    let elapsed = cli.timing.then(|| started.elapsed().as_secs_f64() * 1e3);

    let (text, code) = match result {
        Ok(run) => (run.render(name, cli.canonical, elapsed), 0),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(CliError::Numeric(run)) => {
            if let Some(msg) = run.error_message() {
                eprintln!("error: {msg}");
            }
            (run.render(name, cli.canonical, elapsed), 2)
        }
    };
    if let Err(e) = emit(&cli.out, &text) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
