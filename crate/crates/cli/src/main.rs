mod coherent;
mod holes;
mod output;
mod plaser;
mod truncate;

use std::path::PathBuf;
use std::process::ExitCode;

use bosonlab::{Complex64, Error};
use clap::{Args, Parser, Subcommand};

/// Coherent states, creation-operator coherent states over a condensate,
/// energy-truncated coherent states and symmetrized wave-packet sources.
///
/// Every command writes CSV tables (one header line), a JSON mirror of each
/// and a manifest.json into --out. Exit codes: 0 success, 2 bad arguments or
/// config, 3 numerical or output failure.
#[derive(Parser)]
#[command(name = "bosonlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherent state of a harmonic oscillator: coefficients and one period of motion.
    Coherent(coherent::CoherentArgs),
    /// Creation-operator coherent state on the hole ladder of a condensate.
    Holes(holes::HolesArgs),
    /// Coherent states cut at a finite number of quanta.
    Truncate(truncate::TruncateArgs),
    /// Sampled symmetrized wave-packet sources.
    Plaser {
        #[command(subcommand)]
        command: plaser::PlaserCommand,
    },
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Directory for tables and manifest (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange { .. }
            | Error::InvalidCutoff { .. }
            | Error::InvalidParameter { .. }
            | Error::MismatchedPackets(_)
            | Error::TooLarge { .. }
            | Error::NotSquare { .. }
            | Error::InsufficientGrid { .. } => Failure::Usage(e.to_string()),
            Error::Truncation { .. } | Error::Unnormalized { .. } | Error::Numerical(_) | Error::UndefinedRatio { .. } => {
                Failure::Numerical(e.to_string())
            }
        }
    }
}

impl From<output::WriteError> for Failure {
    fn from(e: output::WriteError) -> Self {
        Failure::Numerical(e.0)
    }
}

pub type Outcome = Result<Vec<PathBuf>, Failure>;

pub fn parse_alpha(s: &str) -> Result<Complex64, String> {
    let z: Complex64 = s.trim().parse().map_err(|_| format!("`{s}` is not a complex number (try 1.5, -0.5+2i)"))?;
    if !z.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(z)
}

pub fn alpha_json(z: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Coherent(a) => coherent::run(&a),
        Command::Holes(a) => holes::run(&a),
        Command::Truncate(a) => truncate::run(&a),
        Command::Plaser { command } => plaser::run(&command),
    };
    match outcome {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
