use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::DEFAULT_POLE_THRESHOLD;
use crate::record::Format;
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "rectgf",
    version,
    about = "Green's functions of piecewise-constant 1D potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every data command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Potential spec file (JSON).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub spec: Option<PathBuf>,
    /// infinite-well, square-well, asymmetric-well, gaas-fig7 or free-particle.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies, parities and normalisation checks.
    BoundStates {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 128)]
        max_states: usize,
    },
    /// G(x_f, x_i; E) over an energy grid.
    Green {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long, allow_negative_numbers = true)]
        xf: f64,
        #[arg(long, allow_negative_numbers = true)]
        emin: f64,
        #[arg(long, allow_negative_numbers = true)]
        emax: f64,
        #[arg(long, default_value_t = 201)]
        n_points: usize,
        /// Rows with |f| below this fraction of the pole scale are flagged.
        #[arg(long, default_value_t = DEFAULT_POLE_THRESHOLD)]
        pole_threshold: f64,
    },
    /// Quasi-bound resonances from the peaks of |A(E)|².
    Resonances {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        emin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        emax: Option<f64>,
        #[arg(long)]
        n_points: Option<usize>,
        /// Also emit the |A|² samples and the barrier |T|², |R|².
        #[arg(long)]
        curve: bool,
        /// Exit with code 4 when no peak is found.
        #[arg(long)]
        expect_peaks: bool,
    },
    /// Cross-check against the independent oracles.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suites to run; all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        /// Tolerance applied to every suite.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the JSON schema of the output records.
    Schema,
}

impl Command {
    pub fn common(&self) -> Option<&Common> {
        match self {
            Command::BoundStates { common, .. }
            | Command::Green { common, .. }
            | Command::Resonances { common, .. }
            | Command::Verify { common, .. } => Some(common),
            Command::Schema => None,
        }
    }
}
