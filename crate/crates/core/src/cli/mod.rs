//! Command-line front end: config parsing, orchestration and file output.
//!
//! Exit codes: 0 success, 1 other failure, 2 config error, 3 size cap,
//! 4 numerical tolerance.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;

pub use commands::{execute, Outcome, Task};
pub use config::{ExperimentConfig, Format, Quantity, ScanRange, ScanVariable, Units};
pub use output::{parse_header, render, Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(e) => match e {
                Error::SizeCap { .. } | Error::DenseCap { .. } => 3,
                Error::Tolerance { .. } | Error::Eigensolver(_) => 4,
                Error::ZeroDimension { .. }
                | Error::SiteOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::Singular { .. }
                | Error::InvalidArgument(_) => 2,
                Error::DenseUnavailable => 1,
            },
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "floquet-ladder", version, about = "Kicked Ising ladders: Floquet spectra, corner Majorana modes and stroboscopic dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasienergies and eigen-residuals of one lattice (columns: index, quasienergy, residual)
    Spectrum(RunArgs),
    /// Deviation of the pi/T level pairing per lattice size (columns: size, min_dev, max_dev, status)
    SpacingTable(RunArgs),
    /// Stroboscopic magnetization trace (columns: n, magnetization)
    Dynamics(RunArgs),
    /// DFT magnitudes of the magnetization trace (columns: k, omega, magnitude)
    Power(RunArgs),
    /// Subharmonic peak over an h range (columns: lattice, h, peak)
    Scan(RunArgs),
    /// Corner-mode spectral functions over a parameter range
    CornerSpectral(RunArgs),
    /// Phase labels and transfer-matrix eigenvalues of the driven chain
    Phase1d(RunArgs),
    /// Re-run the computation recorded in an output file's header
    Rerun {
        file: PathBuf,
        /// Destination; standard output if omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML config file
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set drive.h=0.8` or `--set lattice.bc_x=periodic`
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Destination; overrides `output.path`, standard output if neither is given
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut table = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for s in &self.set {
            config::apply_override(&mut table, s)?;
        }
        let mut cfg = ExperimentConfig::from_table(table)?;
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(o) = &self.out {
            cfg.output.path = Some(o.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }
}

/// Runs one task and writes its output; a per-row failure is returned after
/// the file is written.
pub fn run_task(task: Task, config: &ExperimentConfig) -> Result<(), CliError> {
    let outcome = execute(task, config)?;
    let bytes = render(&outcome.table, config, config.output.format)?;
    match &config.output.path {
        Some(p) => output::write_atomic(Path::new(p), &bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (task, args) = match cli.command {
        Command::Spectrum(a) => (Task::Spectrum, a),
        Command::SpacingTable(a) => (Task::SpacingTable, a),
        Command::Dynamics(a) => (Task::Dynamics, a),
        Command::Power(a) => (Task::Power, a),
        Command::Scan(a) => (Task::Scan, a),
        Command::CornerSpectral(a) => (Task::CornerSpectral, a),
        Command::Phase1d(a) => (Task::Phase1d, a),
        Command::Rerun { file, out } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", file.display())))?;
            let (name, mut cfg) = parse_header(&text)?;
            let task = Task::from_name(&name).ok_or_else(|| CliError::Config(format!("unknown command {name:?} in header")))?;
            cfg.output.path = out.map(|o| o.to_string_lossy().into_owned());
            return run_task(task, &cfg);
        }
    };
    run_task(task, &args.load()?)
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("floquet-ladder: {e}");
            e.exit_code()
        }
    }
}
