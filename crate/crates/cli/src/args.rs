use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Entanglement dynamics of two-qubit states under local Pauli noise.
#[derive(Debug, Parser)]
#[command(name = "pairstab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Channel: inline JSON, a JSON file, or one of
    /// `depolarizing`, `dephasing:P3`, `pauli:P0,P1,P2,P3`, `identity`
    #[arg(long, global = true)]
    pub channel: Option<String>,

    /// State: inline JSON `{"re":[[..]],"im":[[..]]}`, a JSON file, or one of
    /// `bell`, `schmidt:L1`, `pure:C0`, `werner:W`, `mixed:C0`, `xxz:GAMMA,N`,
    /// `maximally-mixed`
    #[arg(long, global = true)]
    pub state: Option<String>,

    /// Decay rate κ of the depolarizing schedule
    #[arg(long, global = true, default_value_t = 1.0)]
    pub kappa: f64,

    /// End of the time grid
    #[arg(long = "t-max", global = true, default_value_t = 1.0)]
    pub t_max: f64,

    /// Number of grid points, endpoints included
    #[arg(long, global = true, default_value_t = 101)]
    pub steps: usize,

    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence of a state along a channel schedule
    Evolve {
        /// Apply the channel to this qubit only (0 or 1)
        #[arg(long)]
        qubit: Option<usize>,
        /// Also evolve this many seeded random mixed states of the same concurrence
        #[arg(long = "random-mixed", default_value_t = 0)]
        random_mixed: usize,
    },
    /// Depolarizing residual concurrence over a grid of initial concurrences and times
    Surface {
        /// Number of C0 grid points on [0, 1]
        #[arg(long = "c0-steps", default_value_t = 21)]
        c0_steps: usize,
    },
    /// Critical time κT_c for a list of initial concurrences
    Critical {
        /// Comma-separated C0 values; a uniform grid on (0, 1] when omitted
        #[arg(long, value_delimiter = ',')]
        c0: Vec<f64>,
        /// Number of grid points when --c0 is omitted
        #[arg(long = "c0-steps", default_value_t = 20)]
        c0_steps: usize,
    },
    /// Random search over local unitaries applied to a Schmidt state
    Optimize {
        /// Schmidt coefficient λ1 (amplitude) of the initial state
        #[arg(long, conflicts_with = "c0")]
        lambda1: Option<f64>,
        /// Initial concurrence, as an alternative to --lambda1
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Time at which a depolarizing channel is evaluated (defaults to --t-max)
        #[arg(long)]
        t: Option<f64>,
    },
    /// Decide whether a state is a depolarized pure state
    Dps,
    /// XXZ ring pair state: pipeline against the closed form
    Spin {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long = "n-sites", default_value_t = 4)]
        n_sites: usize,
    },
}
