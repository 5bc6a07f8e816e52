mod commands;
mod config;
mod csvio;
mod manifest;

use clap::{Parser, Subcommand};

use commands::{AnalyticArgs, CompareArgs, GateCountArgs, RunArgs, ShotsStudyArgs};

/// Radiative-transfer lattice-Boltzmann solvers with a quantum-circuit
/// pipeline, a classical reference, and a closed-form steady-state oracle.
#[derive(Parser, Debug)]
#[command(name = "radlbm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a time-stepping solver and write profile CSVs plus a manifest
    Run(RunArgs),
    /// Evaluate the steady-state solution at the run's cell centers
    Analytic(AnalyticArgs),
    /// Compare two profile CSVs and report error norms
    Compare(CompareArgs),
    /// Sweep shot counts in sampled mode and report RMS error vs exact mode
    ShotsStudy(ShotsStudyArgs),
    /// Report as-built gate counts for the three circuit stages
    GateCount(GateCountArgs),
}

/// CLI failure with a stable exit code per class:
/// 2 usage, 3 domain/config, 4 numeric, 5 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Numeric(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<radlbm_core::Error> for CliError {
    fn from(err: radlbm_core::Error) -> Self {
        match err {
            radlbm_core::Error::Config(_) | radlbm_core::Error::Domain(_) => {
                CliError::Domain(err.to_string())
            }
            radlbm_core::Error::Numeric(_) => CliError::Numeric(err.to_string()),
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(args) => commands::cmd_run(args),
        Command::Analytic(args) => commands::cmd_analytic(args),
        Command::Compare(args) => commands::cmd_compare(args),
        Command::ShotsStudy(args) => commands::cmd_shots_study(args),
        Command::GateCount(args) => commands::cmd_gate_count(args),
    }
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    if let Err(err) = dispatch(&cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
