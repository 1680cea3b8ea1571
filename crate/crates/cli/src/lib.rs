//! Command-line front end for `crossstitch-core`.
//!
//! Each subcommand reads a JSON run configuration (flags override file
//! values), runs one sweep and writes a CSV table, or a JSON report for
//! `fano-check`, plus a `<out>.meta.json` sidecar with the config hash,
//! tolerances and crate versions.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Command, Overrides, RawConfig, RunConfig};
pub use error::CliError;
pub use output::Output;

#[derive(Debug, Parser)]
#[command(
    name = "crossstitch",
    version,
    about = "Band, spectrum and transport sweeps for the PT-symmetric cross-stitch lattice"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub args: CommonArgs,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CliCommand {
    /// Complex Bloch bands and phase labels on a k grid
    Bands,
    /// Region labels on a (gamma, energy) grid
    PhaseDiagram,
    /// Eigenvalues and residuals of the finite open chain
    Spectrum,
    /// Transmission and reflection over real incident energies
    Transmit,
    /// Transmission over a grid of complex incident energies
    ComplexMap,
    /// Transmission over real energies for each overall loss value
    GammaShift,
    /// Spectral equivalence of the chain and its Fano form
    FanoCheck,
}

impl From<CliCommand> for Command {
    fn from(c: CliCommand) -> Self {
        match c {
            CliCommand::Bands => Command::Bands,
            CliCommand::PhaseDiagram => Command::PhaseDiagram,
            CliCommand::Spectrum => Command::Spectrum,
            CliCommand::Transmit => Command::Transmit,
            CliCommand::ComplexMap => Command::ComplexMap,
            CliCommand::GammaShift => Command::GammaShift,
            CliCommand::FanoCheck => Command::FanoCheck,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file; without it the table goes to stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for the sweep
    #[arg(long, global = true, value_name = "K")]
    pub workers: Option<usize>,

    /// Intra-cell hopping
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Inter-cell hopping
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Real on-site imbalance
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Balanced gain and loss
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Uniform loss on every lattice site
    #[arg(long = "Gamma", global = true)]
    pub overall_loss: Option<f64>,
    /// Number of unit cells
    #[arg(long = "N", global = true)]
    pub n_cells: Option<usize>,
    /// Lead hopping scale
    #[arg(long = "V0", global = true)]
    pub v0: Option<f64>,
    /// Lead coupling
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g: Option<f64>,

    #[arg(long, global = true)]
    pub k_points: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub e_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub e_max: Option<f64>,
    #[arg(long, global = true)]
    pub e_points: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub ei_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub ei_max: Option<f64>,
    #[arg(long, global = true)]
    pub ei_points: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma_max: Option<f64>,
    #[arg(long, global = true)]
    pub gamma_points: Option<usize>,
}

impl CommonArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            t: self.t,
            d: self.d,
            delta: self.delta,
            gamma: self.gamma,
            overall_loss: self.overall_loss,
            n_cells: self.n_cells,
            v0: self.v0,
            g: self.g,
            k_points: self.k_points,
            e_min: self.e_min,
            e_max: self.e_max,
            e_points: self.e_points,
            ei_min: self.ei_min,
            ei_max: self.ei_max,
            ei_points: self.ei_points,
            gamma_min: self.gamma_min,
            gamma_max: self.gamma_max,
            gamma_points: self.gamma_points,
            out: self.out.clone(),
            workers: self.workers,
        }
    }
}

/// Loads the file named by `--config` (if any), applies the flags and
/// resolves the result for `command`.
pub fn load_config(command: Command, args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    raw.apply(&args.overrides());
    raw.resolve(command)
}

/// Runs a resolved configuration and writes its artifacts.
///
/// Partial results are still written when some grid points fail; the
/// failure is then reported through the returned error.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let output = commands::run(cfg)?;
    let stdout = std::io::stdout();
    let mut console = stdout.lock();
    let console_err = |source| CliError::Write {
        path: PathBuf::from("<stdout>"),
        source,
    };
    if let Output::Report(report) = &output {
        console.write_all(report.to_text().as_bytes()).map_err(console_err)?;
    }
    match &cfg.out {
        Some(path) => {
            output::write_file(path, &output.render())?;
            output::write_file(
                &output::metadata_path(path),
                &output::metadata_json(&cfg.resolved, &output),
            )?;
        }
        None => {
            if let Output::Table(t) = &output {
                console.write_all(t.to_csv().as_bytes()).map_err(console_err)?;
            }
        }
    }
    match output.failed() {
        0 => Ok(()),
        failed => Err(CliError::FailedPoints {
            failed,
            total: output.total(),
        }),
    }
}

/// Entry point shared by the binary: returns the process exit status.
pub fn main_with(cli: Cli) -> u8 {
    let result = load_config(cli.command.into(), &cli.args).and_then(|cfg| {
        for key in &cfg.unused {
            eprintln!("warning: key `{key}` is not used by `{}`", cfg.command.name());
        }
        execute(&cfg)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
