//! Command line front end for the rigidity toolkit.
//!
//! Exit codes: 0 success (a search that ends with no certificate is still a
//! success), 2 malformed input, 3 well-formed but invalid input, 4 operation
//! unsupported for the model kind, 5 artifact re-verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod artifacts;
mod commands;
mod error;
mod spec;

#[derive(Parser)]
#[command(name = "rigidity", version, about = "Rigid-time search and certification for Hilbert space contractions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a spec, build the model, and print a summary
    Build {
        /// JSON spec file
        spec: PathBuf,
    },
    /// Scan for times where the model is near a scalar multiple of the identity
    Search {
        /// JSON spec file (operator or group section)
        spec: PathBuf,
        /// Target scalar as "re,im"
        #[arg(long, default_value = "1,0", conflicts_with = "lambda_angle", allow_hyphen_values = true)]
        lambda: String,
        /// Target scalar as exp(i*angle), radians
        #[arg(long)]
        lambda_angle: Option<f64>,
        /// Residual threshold a time must beat
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Largest discrete time to scan (operator specs; default 10000)
        #[arg(long)]
        horizon: Option<u64>,
        /// Largest continuous time to scan (group specs; default 100)
        #[arg(long)]
        tmax: Option<f64>,
        /// Grid step for continuous scans (group specs; default 0.1)
        #[arg(long)]
        step: Option<f64>,
        /// Restrict to an arithmetic lane "modulus:residue", or "all"
        #[arg(long)]
        lane: Option<String>,
        /// Stop after this many certified times
        #[arg(long, default_value_t = 8)]
        max_terms: usize,
        /// Output directory for certificate.json and trace.csv
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Construct a periodic model that nearly realizes a scalar target
    Approximate {
        /// JSON spec file (spectral operator, or group with --continuous)
        spec: PathBuf,
        /// Target scalar as "re,im"
        #[arg(long, default_value = "1,0", conflicts_with = "lambda_angle", allow_hyphen_values = true)]
        lambda: String,
        /// Target scalar as exp(i*angle), radians
        #[arg(long)]
        lambda_angle: Option<f64>,
        /// Smallest admissible period
        #[arg(long, default_value_t = 1)]
        min_period: u64,
        /// Tolerance budget for the periodic rounding
        #[arg(long, default_value_t = 2.0)]
        epsilon: f64,
        /// Approximate a one-parameter group instead of a discrete operator
        #[arg(long)]
        continuous: bool,
        /// Time window over which the continuous bound is uniform
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        /// Output directory for approximant.json and model.json
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Estimate the density of times with a small correlation coefficient
    Density {
        /// JSON spec file (operator or group section)
        spec: PathBuf,
        /// Coefficient threshold that counts as a hit
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Largest discrete time to scan (operator specs; default 10000)
        #[arg(long)]
        horizon: Option<u64>,
        /// Largest continuous time to scan (group specs; default 100)
        #[arg(long)]
        tmax: Option<f64>,
        /// Grid step for continuous scans (group specs; default 0.1)
        #[arg(long)]
        step: Option<f64>,
        /// Probe vector: "constant" or "basis:<k>"
        #[arg(long, default_value = "constant")]
        probe: String,
        /// Output directory for density.json and trace.csv
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Re-verify every artifact in a directory and write report.json
    Report {
        /// Directory holding earlier command outputs
        dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    match cli.command {
        Command::Build { spec } => commands::cmd_build(&spec),
        Command::Search {
            spec,
            lambda,
            lambda_angle,
            epsilon,
            horizon,
            tmax,
            step,
            lane,
            max_terms,
            out,
        } => commands::cmd_search(
            &spec,
            &lambda,
            lambda_angle,
            epsilon,
            horizon,
            tmax,
            step,
            lane.as_deref(),
            max_terms,
            &out,
        ),
        Command::Approximate {
            spec,
            lambda,
            lambda_angle,
            min_period,
            epsilon,
            continuous,
            t0,
            out,
        } => commands::cmd_approximate(
            &spec,
            &lambda,
            lambda_angle,
            min_period,
            epsilon,
            continuous,
            t0,
            &out,
        ),
        Command::Density {
            spec,
            epsilon,
            horizon,
            tmax,
            step,
            probe,
            out,
        } => commands::cmd_density(&spec, epsilon, horizon, tmax, step, &probe, &out),
        Command::Report { dir } => commands::cmd_report(&dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap prints its own message; --help/--version exit 0, usage errors 2
        Err(err) => err.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
