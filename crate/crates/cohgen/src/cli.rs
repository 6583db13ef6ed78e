//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Outcome};
use crate::config::{self, Overrides};
use crate::error::Result;
use crate::grid::TimeGrid;
use crate::verify::{Level, LogBase};

/// Coherence generating capacity of Hamiltonians.
///
/// Machine-readable output is written only to the files named by the output flags;
/// stdout carries a short human summary. Exit codes: 0 success, 1 verification failure,
/// 2 input or parse error, 3 solver did not converge.
#[derive(Debug, Parser)]
#[command(name = "cohgen", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity of a Hamiltonian read from a matrix JSON file.
    Capacity(CapacityArgs),
    /// Optimal state and Hamiltonian for dimension d.
    Optimal(OptimalArgs),
    /// Coherence and entropy along exp(-iHt) rho exp(iHt) on a time grid.
    Evolve(EvolveArgs),
    /// Surprisal variance along the (gamma, uniform tail) family.
    ScanGamma(ScanGammaArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver config file with key=value lines; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for the restart streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of gradient-ascent restarts.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Search over mixed states instead of pure states.
    #[arg(long)]
    pub mixed: bool,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Hamiltonian in matrix JSON.
    pub hamiltonian: PathBuf,
    /// Expected dimension; the input is rejected if it differs.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    #[arg(long)]
    pub dim: usize,
    /// JSON report path with gamma, bound, state and Hamiltonian.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the optimal state alone as matrix JSON.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
    /// Write the optimal Hamiltonian alone as matrix JSON.
    #[arg(long)]
    pub hamiltonian_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Density matrix in matrix JSON.
    #[arg(long)]
    pub state: PathBuf,
    /// Hamiltonian in matrix JSON.
    #[arg(long)]
    pub hamiltonian: PathBuf,
    /// Time grid `start:stop:steps`, `steps` samples including both ends.
    #[arg(long)]
    pub grid: TimeGrid,
    /// Trajectory CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanGammaArgs {
    #[arg(long)]
    pub dim: usize,
    /// Number of grid intervals on [0, 1].
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
    /// CSV path with columns gamma,f,sqrt2f.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    pub level: Level,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON suite report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Evaluate the capacity-bound checks with natural logarithms (a planted defect).
    #[arg(long, hide = true)]
    pub mutate_log_base: bool,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Capacity(a) => {
            let overrides = Overrides {
                seed: a.solver.seed,
                restarts: a.solver.restarts,
                mixed: a.solver.mixed,
            };
            let cfg = config::resolve(a.solver.config.as_deref(), &overrides)?;
            commands::capacity(&a.hamiltonian, a.dim, &cfg, a.out.as_deref())
        }
        Command::Optimal(a) => commands::optimal(
            a.dim,
            a.out.as_deref(),
            a.state_out.as_deref(),
            a.hamiltonian_out.as_deref(),
        ),
        Command::Evolve(a) => commands::evolve(&a.state, &a.hamiltonian, &a.grid, a.out.as_deref()),
        Command::ScanGamma(a) => {
            commands::scan_gamma(a.dim, a.resolution, a.out.as_deref(), a.summary.as_deref())
        }
        Command::Verify(a) => {
            let base = if a.mutate_log_base {
                LogBase::Natural
            } else {
                LogBase::Two
            };
            commands::verify(a.level, a.seed, base, a.out.as_deref())
        }
    }
}
