//! Command-line driver: full reconstructions, the structural verification
//! suite, resource tables and the single-configuration population demo.

pub mod commands;
pub mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status of a failed check or an under-determined reconstruction.
pub const EXIT_FAILURE: u8 = 1;
/// Exit status of unusable input.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dcqd",
    version,
    about = "Direct characterization of qudit dynamics by stabilizer measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate all d^2 configurations on a channel and reconstruct its chi matrix.
    Reconstruct(ReconstructArgs),
    /// Run the structural and rank checks for one dimension.
    Verify {
        /// Prime qudit dimension.
        #[arg(long)]
        d: u32,
    },
    /// Print the resource comparison of tomography schemes.
    Resources {
        /// Prime qudit dimension.
        #[arg(long)]
        d: u32,
        /// Number of qudits.
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Extract the chi diagonal from the single population configuration.
    PopulationDemo {
        /// Prime qudit dimension.
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        channel: ChannelArgs,
        /// Seed for a random channel.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Geometric,
    Random,
}

/// Where the channel under test comes from; the identity channel when none is given.
#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct ChannelArgs {
    /// Channel-specification JSON document.
    #[arg(long, value_name = "FILE")]
    pub channel: Option<std::path::PathBuf>,
    /// Random channel drawn from --seed.
    #[arg(long)]
    pub random_channel: bool,
    /// Depolarizing channel with this error probability.
    #[arg(long, value_name = "P")]
    pub depolarizing: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    /// Prime qudit dimension.
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Kraus rank of a random channel (defaults to d).
    #[arg(long, requires = "random_channel")]
    pub kraus_rank: Option<usize>,
    /// Draw a random channel that loses probability.
    #[arg(long, requires = "random_channel")]
    pub non_trace_preserving: bool,
    /// Shots per configuration; exact statistics when omitted.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Seed for random channels, coefficients and sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the run report here.
    #[arg(long, value_name = "FILE")]
    pub output: Option<std::path::PathBuf>,
    /// Add the trace-preservation constraint rows.
    #[arg(long)]
    pub trace_preserving: bool,
    #[arg(long, value_enum, default_value_t = PolicyArg::Geometric)]
    pub alphas_policy: PolicyArg,
    /// Rotate which eligible normalizer subgroups are measured.
    #[arg(long, default_value_t = 0)]
    pub subgroup_offset: usize,
    /// Clip negative eigenvalues of the estimate.
    #[arg(long)]
    pub psd: bool,
    /// Leave the wall-clock field empty so reports are reproducible byte for byte.
    #[arg(long)]
    pub omit_timing: bool,
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Reconstruct(args) => commands::reconstruct(&args),
        Command::Verify { d } => commands::verify(d),
        Command::Resources { d, n } => commands::resources(d, n),
        Command::PopulationDemo { d, channel, seed } => commands::population_demo(d, &channel, seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
