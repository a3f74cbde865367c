//! Command-line front end. Each subcommand resolves an [`ExperimentConfig`]
//! (config file, then flags), runs a sweep and writes one CSV table.
//!
//! Exit codes: 0 on success, 2 for configuration or I/O problems, 3 when a
//! numerical routine fails.

mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::execute;
pub use config::{parse_angle, ExperimentConfig};
pub use table::Table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(crate::Error),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            InvalidLattice(_)
            | UnsupportedCoinAngle { .. }
            | NonOrthogonalPair { .. }
            | RingTooSmall(_)
            | InvalidParameter(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "impwalk", version, about = "Quantum walk with a phase impurity")]
pub struct Cli {
    /// Worker threads for parameter sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Emit a JSON envelope instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Position distribution after a number of steps.
    Evolve(Common),
    /// Analytic bound states over a phase grid.
    BoundStates(Common),
    /// Participation ratio and origin probability, numeric and analytic.
    Localisation(Common),
    /// Trace-distance non-Markovianity maximised over initial pairs.
    Blp(Common),
    /// Entanglement-based non-Markovianity with a static ancilla.
    Rhp(Common),
    /// Quasi-energies of the step operator on a ring.
    Spectrum(Common),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::BoundStates(_) => "bound-states",
            Command::Localisation(_) => "localisation",
            Command::Blp(_) => "blp",
            Command::Rhp(_) => "rhp",
            Command::Spectrum(_) => "spectrum",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Evolve(c)
            | Command::BoundStates(c)
            | Command::Localisation(c)
            | Command::Blp(c)
            | Command::Rhp(c)
            | Command::Spectrum(c) => c,
        }
    }
}

/// Flags shared by all subcommands. Angles take radians or multiples of pi
/// such as `0.25pi`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coin angle.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Impurity phase, or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Number of uniform phases on [0, 2pi) when --phi is absent.
    #[arg(long)]
    pub phi_grid: Option<String>,
    /// Step count; a comma-separated list of horizons for blp and rhp.
    #[arg(long)]
    pub steps: Option<String>,
    /// Initial coin polar angle.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Initial coin azimuth.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Pair grid points per axis (blp) or ring size (spectrum).
    #[arg(long)]
    pub grid: Option<String>,
    /// Refinement points per axis around the best blp cell.
    #[arg(long)]
    pub refine: Option<String>,
    /// Even steps averaged for the origin probability.
    #[arg(long)]
    pub window: Option<String>,
    /// Bell-state basis for rhp: x or z.
    #[arg(long)]
    pub basis: Option<String>,
    /// Directory for per-phase time series (blp, rhp).
    #[arg(long)]
    pub series_dir: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    /// Config file contents overlaid with the flags given here.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                ExperimentConfig::parse(&text)?
            }
            None => ExperimentConfig::default(),
        };
        let flags = [
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("phi-grid", &self.phi_grid),
            ("steps", &self.steps),
            ("gamma", &self.gamma),
            ("eta", &self.eta),
            ("grid", &self.grid),
            ("refine", &self.refine),
            ("window", &self.window),
            ("basis", &self.basis),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v.clone());
            }
        }
        if let Some(p) = &self.series_dir {
            cfg.set("series-dir", p.display().to_string());
        }
        Ok(cfg)
    }
}

fn run_parsed(cli: Cli) -> Result<(), CliError> {
    let common = cli.command.common();
    let cfg = common.resolve()?;
    let run = || execute(cli.command.name(), &cfg);
    let table = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let text = if cli.json {
        table.to_json(cli.command.name(), &cfg)
    } else {
        table.to_csv()
    };
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_parsed(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("impwalk: {e}");
            e.exit_code()
        }
    }
}
