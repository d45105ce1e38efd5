use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod demos;
mod input;
mod report;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "bsa", version, about = "Exact checks for the adjusted Bhatia-Šemrl property")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

/// Flags shared by every command.
#[derive(clap::Args, Debug, Clone)]
pub struct Config {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random instances in suites.
    #[arg(long, global = true, default_value_t = 500)]
    pub n: usize,
    /// Depth of the block and Cantor constructions.
    #[arg(long, global = true, default_value_t = 4)]
    pub depth: usize,
    /// Sampled norming elements per verification.
    #[arg(long, global = true, default_value_t = 20)]
    pub samples: usize,
    /// JSON input in the canonical encodings.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall-clock timings, which makes reports nondeterministic.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orthogonality of a pair, or the BS check of an instance.
    CheckOrth {
        #[arg(long, value_enum, default_value_t = ModeArg::AdjustedBs)]
        mode: ModeArg,
    },
    /// Run one construction and verify every clause.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
    /// Adjusted BS checks on random strongly orthogonal directions.
    Stress {
        #[arg(long, value_enum, default_value_t = SpaceArg::C0)]
        space: SpaceArg,
        /// Instance files checked after the random ones.
        #[arg(long)]
        inject: Vec<PathBuf>,
    },
    /// Euclidean matrix model.
    MatrixBs {
        #[arg(long, default_value_t = bsa_core::matrix_bs::DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Bs,
    AdjustedBs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    C0,
    L1,
    Measure,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Demo {
    C0Denseness,
    L1Denseness,
    L1RnpNegative,
    MeasureEx1,
    MeasureEx2,
    DiracBs,
    C01Nondense,
    Weakstar,
}

/// Malformed input or unmet preconditions; exit code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<Report, Invalid> {
    let cfg = &cli.config;
    match &cli.command {
        Command::CheckOrth { mode } => {
            let mode = match mode {
                ModeArg::Bs => bsa_core::bs_checker::Mode::Bs,
                ModeArg::AdjustedBs => bsa_core::bs_checker::Mode::AdjustedBs,
            };
            demos::check_orth(cfg, mode)
        }
        Command::Demo { name } => demos::demo(cfg, *name),
        Command::Stress { space, inject } => {
            let space = match space {
                SpaceArg::C0 => bsa_core::bs_checker::Space::C0,
                SpaceArg::L1 => bsa_core::bs_checker::Space::L1,
                SpaceArg::Measure => bsa_core::bs_checker::Space::Measure,
            };
            demos::stress(cfg, space, inject)
        }
        Command::MatrixBs { tol } => demos::matrix_bs(cfg, *tol),
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::CheckOrth { .. } => "check-orth".into(),
        Command::Demo { name } => format!(
            "demo {}",
            name.to_possible_value().expect("no skipped variants").get_name()
        ),
        Command::Stress { .. } => "stress".into(),
        Command::MatrixBs { .. } => "matrix-bs".into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Invalid(msg)) => {
            eprintln!("bsa: {msg}");
            return ExitCode::from(2);
        }
    };
    let passed = report.passed();
    let timings: Value = if cli.config.timings {
        json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 })
    } else {
        Value::Null
    };
    let doc = report.into_json(&command_name(&cli.command), &cli.config, timings);
    let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    text.push('\n');
    let written = match &cli.config.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("bsa: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
