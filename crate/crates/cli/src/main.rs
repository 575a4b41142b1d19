//! `kpo4`: command-line front end for the four-body coupling toolkit.
//!
//! Every subcommand writes one CSV document: `#` metadata lines (tool version and a
//! SHA-256 of the resolved inputs), a header row, then data rows with numbers at nine
//! significant digits. Errors print a single `error[CODE]: message` line.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Core(kpo4_core::Error),
    Usage(String),
    Parse(String),
    Io(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "E_USAGE",
            CliError::Parse(_) => "E_PARSE",
            CliError::Io(_) => "E_IO",
            CliError::Data(_) => "E_DATA",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Parse(m) | CliError::Io(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<kpo4_core::Error> for CliError {
    fn from(e: kpo4_core::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "kpo4", version, about = "Four-body coupling design for KPO circuits")]
struct Cli {
    /// Write the table here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Log warnings and progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frequency and Kerr of every branch of a netlist.
    Quantize(commands::NetlistArgs),
    /// Exact and closed-form two-body couplings of a netlist.
    Couplings(commands::NetlistArgs),
    /// Four-body couplings of the reference circuits against unit detuning.
    Sweep(commands::SweepArgs),
    /// SNAIL equilibrium, expansion coefficients, frequency and Kerr against flux.
    Snail(commands::SnailArgs),
    /// LHZ pump-frequency plan, or classification of four given pumps.
    PumpPlan(commands::PumpPlanArgs),
    /// Even and odd parity totals against the plaquette pump phase.
    Parity(commands::ModelArgs),
    /// State probabilities against the fourth drive phase.
    Boltzmann(commands::ModelArgs),
    /// Energy coefficients fitted to a probability table.
    Fit(commands::FitArgs),
    /// Four-body coupling from exact diagonalization of the SQUID plaquette.
    Oracle(commands::OracleArgs),
}

fn run(cli: Cli) -> Result<Vec<u8>, CliError> {
    match cli.command {
        Command::Quantize(a) => commands::quantize(&a),
        Command::Couplings(a) => commands::couplings(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Snail(a) => commands::snail(&a),
        Command::PumpPlan(a) => commands::pump_plan(&a),
        Command::Parity(a) => commands::parity(&a),
        Command::Boltzmann(a) => commands::boltzmann(&a),
        Command::Fit(a) => commands::fit(&a),
        Command::Oracle(a) => commands::oracle(&a),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let msg = e.to_string().replace('\n', " ");
    eprintln!("error[{}]: {}", e.code(), msg.trim());
    ExitCode::from(match e {
        CliError::Usage(_) => 2,
        _ => 1,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let head = text.split("\n\n").next().unwrap_or_default();
            let msg = head.trim_start_matches("error: ").split_whitespace().collect::<Vec<_>>().join(" ");
            return fail(&CliError::Usage(msg));
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .format_target(false)
        .format_timestamp(None)
        .init();
    let output = cli.output.clone();
    let bytes = match run(cli) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let written = match output {
        Some(path) => std::fs::write(&path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(&bytes).map_err(|e| CliError::Io(e.to_string())),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
