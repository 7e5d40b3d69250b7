//! Command-line front end: config parsing, energy sweeps and CSV output.

mod commands;
mod config;

pub use commands::{
    cmd_amplitudes, cmd_compare, cmd_series, fmt_num, CommandOutput, ExitStatus, SweepRow,
    AMPLITUDES_HEADER, COMPARE_HEADER, SERIES_HEADER,
};
pub use config::{parse_config, ConfigError, EnergyGrid, RunConfig, SeriesOptions, Spacing};

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "scatter1d",
    version,
    about = "1D scattering amplitudes from the resummed Born series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Resummed t and r over the energy grid.
    Amplitudes(IoArgs),
    /// Per-order diagram table.
    Series(IoArgs),
    /// Closed forms against the transfer-matrix and ODE oracles.
    Compare(IoArgs),
}

#[derive(Debug, Args)]
struct IoArgs {
    #[arg(long)]
    config: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitStatus::ConfigError.code()
            } else {
                0
            };
        }
    };
    let (io, command): (&IoArgs, fn(&RunConfig) -> CommandOutput) = match &cli.command {
        Command::Amplitudes(io) => (io, cmd_amplitudes),
        Command::Series(io) => (io, cmd_series),
        Command::Compare(io) => (io, cmd_compare),
    };

    let text = match std::fs::read_to_string(&io.config) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", io.config.display());
            return ExitStatus::ConfigError.code();
        }
    };
    let mut config = match parse_config(&text) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {}: {err}", io.config.display());
            return ExitStatus::ConfigError.code();
        }
    };
    config.output = io.out.clone();
    if matches!(cli.command, Command::Series(_))
        && matches!(config.potential, crate::born::PotentialSpec::DeltaComb(_))
    {
        eprintln!(
            "error: {}: series needs a single delta or barrier",
            io.config.display()
        );
        return ExitStatus::ConfigError.code();
    }

    let output = command(&config);
    let written = match &config.output {
        Some(path) => std::fs::write(path, &output.csv),
        None => std::io::stdout().lock().write_all(output.csv.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("error: cannot write output: {err}");
        return ExitStatus::ConfigError.code();
    }
    output.status.code()
}
