//! `minpulse`: pulse generation, spectra, correlations, gains and the
//! quadrature receiver from the command line.
//!
//! Exit status: 0 on success, 2 for a bad configuration, 3 when the
//! numerics refuse (coverage, sampling, alignment), 1 for I/O failures.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

use config::RunConfig;

#[derive(Parser)]
#[command(name = "minpulse", version, about = "Minimally compressible RF pulses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample x, y, w, μ and ψ on a time grid
    Generate(RunConfig),
    /// X(ω), Y(ω), |W(ω)| and the Kramers-Kronig residual
    Spectrum(RunConfig),
    /// The six correlation traces, with differences from the closed forms
    Correlate(RunConfig),
    /// Compression gain report (JSON)
    Gain(RunConfig),
    /// Quadrature receiver and phase-invariant processor
    Receiver(RunConfig),
    /// Length-2 Golay pair and its continuous analogue
    Golay(RunConfig),
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(minpulse::Error),
    Io(std::io::Error),
}

impl From<minpulse::Error> for CliError {
    fn from(e: minpulse::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numeric(e)
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Handler = fn(&RunConfig) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (flags, f): (RunConfig, Handler) = match cli.command {
        Command::Generate(c) => (c, commands::generate),
        Command::Spectrum(c) => (c, commands::spectrum),
        Command::Correlate(c) => (c, commands::correlate),
        Command::Gain(c) => (c, commands::gain),
        Command::Receiver(c) => (c, commands::receiver),
        Command::Golay(c) => (c, commands::golay),
    };
    f(&RunConfig::resolve(flags)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("minpulse: config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("minpulse: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("minpulse: i/o error: {e}");
            ExitCode::from(1)
        }
    }
}
