//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bellsim",
    version,
    about = "CHSH Bell tests on two-photon polarization states with colored and white noise",
    after_help = "Angles are in degrees. Floats are written with 9 significant digits.\n\
                  BELLSIM_THREADS=N caps the worker threads."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Source configuration (TOML)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed for all sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Infinite statistics: trace values instead of sampled counts
    #[arg(long, global = true)]
    pub exact: bool,
    /// Suppress the one-line summary
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// p|Φ+⟩⟨Φ+| + (1−p)/2 (|oo⟩⟨oo| + |ee⟩⟨ee|)
    Colored,
    /// Werner: p|Φ+⟩⟨Φ+| + (1−p) I/4
    White,
    /// w · colored + (1−w) I/4
    Mixed,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value_t = Family::Colored)]
    pub family: Family,
    /// Colored-noise weight of the mixed family
    #[arg(long, default_value_t = 0.96)]
    pub w: f64,
}

#[derive(Debug, Clone, Args)]
pub struct AngleArgs {
    /// Fixed θ (degrees); requires --phi. Default: optimal restricted angles
    #[arg(long, requires = "phi", allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Fixed φ (degrees); requires --theta
    #[arg(long, requires = "theta", allow_negative_numbers = true)]
    pub phi: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal Bell value versus the Bell-state weight p
    BellMax {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        p_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[command(flatten)]
        state: StateArgs,
        /// Also measure at the optimal angles with this many shots per setting
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Simulated experiment over trombone delays (needs --config)
    DelaySweep {
        /// Default 0
        #[arg(long, allow_negative_numbers = true)]
        tau_min: Option<f64>,
        /// Default: half the walk-off window, |D_G L|/2
        #[arg(long, allow_negative_numbers = true)]
        tau_max: Option<f64>,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[command(flatten)]
        angles: AngleArgs,
        /// Detection efficiency per detector, in (0, 1]
        #[arg(long)]
        efficiency: Option<f64>,
        /// Fraction of uniformly random coincidences, in [0, 1)
        #[arg(long)]
        accidentals: Option<f64>,
    },
    /// Bell value of the colored state on a θ × φ grid (rows θ, columns φ)
    Surface {
        #[arg(long)]
        p: f64,
        /// Points per axis over [−90°, 90°]
        #[arg(long, default_value_t = 181)]
        resolution: usize,
    },
    /// Single CHSH measurement runs at fixed or optimal angles
    Simulate {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        /// Independent runs; run r uses a seed derived from (seed, r)
        #[arg(long, default_value_t = 1)]
        repeats: u64,
    },
    /// Nine-basis state tomography; writes JSON plus a coefficient CSV
    Tomo {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Shots per measurement basis
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        /// Coefficient CSV; default next to --out as <stem>.coeffs.csv
        #[arg(long, value_name = "PATH")]
        coeffs: Option<PathBuf>,
    },
    /// Check a source configuration and print the resolved parameters
    Validate,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Bell-state weight p
    #[arg(long, conflicts_with = "tau", allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Trombone delay in fs; p follows from the source config
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
}
