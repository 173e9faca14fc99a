//! `qds`: scenario-driven certification and evolution for dissipative
//! dynamics on finite-dimensional C*-algebras.
//!
//! Exit codes: 0 all checks pass, 1 a violation was found (the report embeds
//! the witness), 2 invalid input.

mod commands;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Common;

/// Invalid input (exit code 2) with a diagnostic naming the failing field.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qds",
    version,
    about = "Certify and evolve dissipative dynamics on finite-dimensional C*-algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the scenario amplification cap.
    #[arg(long)]
    n_max: Option<usize>,
    /// Write the report to this path (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn into_common(self) -> Common {
        Common {
            seed: self.seed,
            tol: self.tol,
            n_max: self.n_max,
            out: self.out,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify complete dissipativity of a generator and complete positivity
    /// of its semigroup over a time grid.
    Certify {
        scenario: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evolve an observable under the semigroup (generator scenarios) or the
    /// finite-volume Heisenberg dynamics (lattice scenarios); writes CSV.
    Evolve {
        scenario: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Time grid as start:stop:step (inclusive); defaults to the
        /// scenario's grid.
        #[arg(long)]
        t_grid: Option<String>,
        /// "identity", "sigma_x"/"sigma_y"/"sigma_z", "basis:r:c", or
        /// "basis:g:r:c".
        #[arg(long, default_value = "identity")]
        observable: String,
        /// Chain radius around the observable site (lattice scenarios).
        #[arg(long, default_value_t = 1)]
        radius: i64,
    },
    /// Interaction-norm bound and finite-volume convergence of a chain.
    Lattice {
        scenario: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Exponential weight for the interaction-norm bound.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Nested volume radii for the convergence diagnostic.
        #[arg(long, default_value = "1,2,3")]
        radii: String,
        /// Evolution time for the convergence diagnostic.
        #[arg(long, default_value_t = 0.2)]
        time: f64,
        /// Center-site observable; omitting it skips the convergence
        /// diagnostic.
        #[arg(long)]
        observable: Option<String>,
    },
    /// GNS construction and the two-sided implementation pipeline with
    /// amplified-level verification.
    Gns {
        scenario: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Certify { scenario, common } => commands::run_certify(&scenario, &common.into_common()),
        Command::Evolve {
            scenario,
            common,
            t_grid,
            observable,
            radius,
        } => commands::run_evolve(&scenario, &common.into_common(), t_grid.as_deref(), &observable, radius),
        Command::Lattice {
            scenario,
            common,
            lambda,
            radii,
            time,
            observable,
        } => commands::run_lattice(&scenario, &common.into_common(), lambda, &radii, time, observable.as_deref()),
        Command::Gns { scenario, common } => commands::run_gns(&scenario, &common.into_common()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
    }
}
