//! `qg`: spectra, bounds, surgery and property sweeps for metric graphs.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgraph::random::DEFAULT_SEED;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Input = 1,
    Solver = 2,
    Violation = 3,
    Vacuous = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { exit: Exit::Input, message: message.into() }
    }
}

impl From<qgraph::Error> for Failure {
    fn from(e: qgraph::Error) -> Self {
        let exit = if e.is_solver_failure() { Exit::Solver } else { Exit::Input };
        Self { exit, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Number of eigenvalues.
    #[arg(long)]
    pub k: Option<usize>,
    /// Maximum element length.
    #[arg(long)]
    pub h: Option<f64>,
    /// Master seed for random sweeps.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Directory for output files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the report on standard output.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "qg", version, about = "Spectral toolkit for metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues and eigenfunctions.
    Spectrum {
        graph: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Check the geometric eigenvalue bounds.
    Bounds {
        graph: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Apply a surgery script and check each predicted comparison.
    Surgery {
        graph: PathBuf,
        #[arg(long)]
        script: PathBuf,
        /// Apply the script without re-solving.
        #[arg(long)]
        no_check: bool,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Nodal domain counts.
    Nodal {
        graph: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Seeded property sweep, over random graphs or over one given graph.
    Verify {
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Discrete Laplacian of the underlying combinatorial graph.
    Discrete {
        graph: PathBuf,
        /// JSON array of vertex values for the mean value check.
        #[arg(long)]
        vector: Option<PathBuf>,
        #[command(flatten)]
        config: RunConfig,
    },
}

fn run(cli: Cli) -> Result<Exit, Failure> {
    match cli.command {
        Command::Spectrum { graph, config } => commands::spectrum(&config, &graph),
        Command::Bounds { graph, config } => commands::bounds(&config, &graph),
        Command::Surgery { graph, script, no_check, config } => commands::surgery(&config, &graph, &script, !no_check),
        Command::Nodal { graph, config } => commands::nodal(&config, &graph),
        Command::Verify { graph, instances, config } => commands::verify(&config, graph.as_deref(), instances),
        Command::Discrete { graph, vector, config } => commands::discrete(&config, &graph, vector.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Input as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("qg: {}", f.message);
            ExitCode::from(f.exit as u8)
        }
    }
}
