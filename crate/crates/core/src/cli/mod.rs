//! The `trajsim` command-line pipeline: one subcommand per stage.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 data or shape, 5 numeric.

mod encode;
mod ltc;
mod output;
mod report;
mod repsim;
mod synth;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::Error;

pub use encode::EncodeArgs;
pub use ltc::LtcArgs;
pub use report::ReportArgs;
pub use repsim::RepsimArgs;
pub use synth::SynthArgs;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "TRAJSIM_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "trajsim",
    version,
    about = "Representational and latent-trajectory similarity toolkit"
)]
pub struct Cli {
    /// Output directory (default: $TRAJSIM_OUT, else `trajsim_out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic coupled dataset with known ground truth.
    Synth(SynthArgs),
    /// Layerwise ridge encoding with nested cross-validation.
    Encode(EncodeArgs),
    /// RDMs, RSA, CKA, spatiotemporal map and connectivity of predicted vs observed signals.
    Repsim(RepsimArgs),
    /// Latent trajectory comparison and DRA.
    Ltc(LtcArgs),
    /// Merge the stage outputs in the output directory into one report.
    Report(ReportArgs),
}

fn flag_name(param: &str) -> String {
    match param {
        "noise_sigma" => "--noise".into(),
        "alpha_penalty" => "--alpha".into(),
        "alpha_grid" => "--alphas".into(),
        other => format!("--{}", other.replace('_', "-")),
    }
}

/// Rewrites a parameter error in terms of the command-line flag.
pub(crate) fn usage(e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => {
            Error::InvalidConfig(format!("invalid value for {}: {reason}", flag_name(name)))
        }
        other => other,
    }
}

fn output_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("trajsim_out"))
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> crate::Result<()> {
    if cli.threads == Some(0) {
        return Err(usage(Error::param("threads", "must be at least 1")));
    }
    if let Some(n) = cli.threads {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = output_dir(cli);
    match &cli.command {
        Command::Synth(a) => synth::run(a, &out),
        Command::Encode(a) => encode::run(a, &out),
        Command::Repsim(a) => repsim::run(a, &out),
        Command::Ltc(a) => ltc::run(a, &out),
        Command::Report(a) => report::run(a, &out),
    }
}

/// Parses `args`, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let err = anyhow::Error::new(e).context(format!("trajsim {}", subcommand_name(&cli.command)));
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(1, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Synth(_) => "synth",
        Command::Encode(_) => "encode",
        Command::Repsim(_) => "repsim",
        Command::Ltc(_) => "ltc",
        Command::Report(_) => "report",
    }
}
