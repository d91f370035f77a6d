use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xtwalk::classify::FeatureMode;
use xtwalk::distfit::Binning;
use xtwalk::Domain;

mod config;
mod run;

/// Crosstalk simulation and step-distribution analysis.
#[derive(Debug, Parser)]
#[command(name = "xtwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// i.i.d. uniform phases at every sample
    Baseline,
    /// Random-walk phases at every phase-matching point
    Walk,
    /// Gaussian random walk of the dB level
    Gwalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetrendArg {
    None,
    Mean,
}

/// How to read an input series when its sidecar is missing or incomplete.
#[derive(Debug, Clone, Args)]
struct InputArgs {
    /// Input series (CSV)
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Name of the time column
    #[arg(long, default_value = "time_s")]
    time_col: String,
    /// Name of the value column
    #[arg(long, default_value = "value")]
    value_col: String,
    /// Domain of the values, overriding the sidecar
    /// (linear-power, dB or dB-step)
    #[arg(long)]
    domain: Option<Domain>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic crosstalk series
    Simulate {
        #[arg(long, value_enum)]
        model: Model,
        /// Number of phase-matching points
        #[arg(long, default_value_t = 100)]
        n_pm: usize,
        /// Coupling coefficient
        #[arg(long, default_value_t = 1.0)]
        chi: f64,
        /// Standard deviation of the phase increments (step size for gwalk, in dB)
        #[arg(long, default_value_t = 0.1)]
        sigma_gamma: f64,
        /// Mean of the phase increments
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu_gamma: f64,
        #[arg(long, default_value_t = 2)]
        n_pol: usize,
        #[arg(long)]
        samples: usize,
        /// Sampling interval in seconds
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Fit the four-degree chi-squared law to a linear-power series
    FitChi2 {
        #[command(flatten)]
        input: InputArgs,
        /// Bin count or `fd` (Freedman-Diaconis)
        #[arg(long, default_value = "100")]
        bins: Binning,
        #[arg(long, value_name = "FILE")]
        out_json: PathBuf,
        /// Histogram and fitted density as CSV
        #[arg(long, value_name = "FILE")]
        plot_data: Option<PathBuf>,
    },
    /// Convert to dB and take consecutive differences
    Steps {
        #[command(flatten)]
        input: InputArgs,
        /// Power floor applied before the logarithm
        #[arg(long, default_value_t = xtwalk::steps::DEFAULT_FLOOR)]
        floor: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Fit a pseudo-Voigt profile to a dB-step series
    FitPvp {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "100")]
        bins: Binning,
        #[arg(long, value_name = "FILE")]
        out_json: PathBuf,
        #[arg(long, value_name = "FILE")]
        plot_data: Option<PathBuf>,
    },
    /// Peak-normalized periodogram
    Psd {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "mean")]
        detrend: DetrendArg,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Autocovariance and autocorrelation up to a maximum lag
    Acf {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        max_lag: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Short-term average crosstalk over non-overlapping blocks
    Staxt {
        #[command(flatten)]
        input: InputArgs,
        /// Block length in samples
        #[arg(long)]
        window: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Coarsen the averaging time by an integer factor
    Resample {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        factor: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Phase uniformity (KS distance) after T random-walk steps
    Converge {
        #[arg(long)]
        sigma_gamma: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu_gamma: f64,
        /// Comma-separated step counts
        #[arg(long, value_delimiter = ',', required = true)]
        t_list: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        n_phases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Step-fit accuracy versus window length
    Resilience {
        #[command(flatten)]
        input: InputArgs,
        /// Benchmark window in hours
        #[arg(long)]
        benchmark: f64,
        /// START,STEP,END window lengths in minutes
        #[arg(long, value_delimiter = ',', required = true)]
        schedule: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
        #[arg(long, default_value = "100")]
        bins: Binning,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Train and test the step-feature classifier
    Classify {
        /// JSON experiment description
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        #[arg(long)]
        mode: FeatureMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out_json: PathBuf,
    },
}

fn exit_code(err: &xtwalk::Error) -> u8 {
    use xtwalk::Error::*;
    match err {
        InvalidArgument(_) | Degenerate(_) => 2,
        Io { .. } | Parse { .. } | NonUniformTime { .. } => 3,
        NonConvergence { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
