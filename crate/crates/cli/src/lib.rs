//! Batch experiment runner for the `mfrisk-core` library.
//!
//! Each subcommand reads one JSON [`config::ExperimentConfig`], runs the
//! matching library routines and writes CSV tables plus a JSON summary into
//! the output directory. Files are only written once the whole command has
//! succeeded.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Overrides};

/// Exit status for a configuration problem.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for a numerical failure.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical { command: &'static str, source: mfrisk_core::Error },
    Io(String),
    AcceptanceFailed(Vec<u8>),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "configuration error: {m}"),
            RunError::Numerical { command, source } => match source.operation() {
                Some(op) => write!(f, "numerical error in {op} (during {command}): {source}"),
                None => write!(f, "numerical error during {command}: {source}"),
            },
            RunError::Io(m) => write!(f, "i/o error: {m}"),
            RunError::AcceptanceFailed(ids) => write!(f, "acceptance criteria failed: {ids:?}"),
        }
    }
}

impl std::error::Error for RunError {}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Numerical { .. } => EXIT_NUMERICAL,
            RunError::Io(_) | RunError::AcceptanceFailed(_) => 1,
        }
    }

    /// Sorts a library error into a configuration or numerical failure.
    pub fn from_core(command: &'static str, e: mfrisk_core::Error) -> Self {
        use mfrisk_core::Error as E;
        match e {
            E::InvalidParams(m) => RunError::Config(m),
            E::ConfigMismatch { .. } | E::NotSubexponential(_) => RunError::Config(e.to_string()),
            source => RunError::Numerical { command, source },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mfrisk", version, about = "Mixed fractional Poisson risk experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub n_paths: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sample paths of Y, N and the compound or surplus process.
    Simulate,
    /// Closed-form and Monte Carlo moments.
    Moments,
    /// State probabilities, interarrival law and pgf.
    Distribution,
    /// Finite-horizon ruin probabilities.
    Ruin,
    /// Correlation decay and LRD/SRD exponents.
    Dependence,
    /// Full acceptance suite.
    Acceptance,
}

/// Runs one command and writes its files; returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mfrisk: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(), RunError> {
    let overrides = Overrides {
        seed: cli.seed,
        n_paths: cli.n_paths,
        workers: cli.workers,
        out_dir: cli.out_dir.clone(),
    };
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None if cli.command == Command::Acceptance => acceptance::reference_config(),
        None => return Err(RunError::Config("--config is required for this command".into())),
    };
    cfg.apply(&overrides)?;
    log::info!("{:?} with config {}", cli.command, cfg.hash());
    let (files, outcome) = match cli.command {
        Command::Simulate => (commands::simulate(&cfg)?, Ok(())),
        Command::Moments => (commands::moments(&cfg)?, Ok(())),
        Command::Distribution => (commands::distribution(&cfg)?, Ok(())),
        Command::Ruin => (commands::ruin(&cfg)?, Ok(())),
        Command::Dependence => (commands::dependence(&cfg)?, Ok(())),
        Command::Acceptance => {
            let report = acceptance::run_suite(cfg.sim.master_seed, cfg.sim.workers);
            for c in &report.criteria {
                println!("{}", c.line());
            }
            let failed = report.failed();
            let files = vec![output::json_file("acceptance.json", &cfg, &report)?];
            (files, if failed.is_empty() { Ok(()) } else { Err(RunError::AcceptanceFailed(failed)) })
        }
    };
    output::write_all(&cfg.out_dir, &files)?;
    outcome
}
