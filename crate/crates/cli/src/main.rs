//! `tracespec`: spectral estimation experiments from JSON configs.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Common;
use error::CliError;

#[derive(Parser)]
#[command(name = "tracespec", version, about = "Eigenvalue spectra from trace time series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Flags {
    /// Root seed; overrides the config's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct WithConfig {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Exact eigenvalues of a Hamiltonian term file.
    Diagonalize {
        hamiltonian: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Hadamard-test time series `Tr(exp(-iHt))/d`.
    Series(WithConfig),
    /// Averaged random-phase autocorrelation series.
    Stochastic(WithConfig),
    /// Power spectrum and peaks of a series CSV.
    Spectrum(WithConfig),
    /// Gate counts of one controlled Trotter step per synthesis variant.
    SynthCount(WithConfig),
    /// Route a circuit file onto a coupling graph.
    Route(WithConfig),
    /// Estimated protocol fidelity against chain length.
    Fidelity(WithConfig),
    /// Decay of the maximally mixed register under relaxation.
    MmsLifetime(WithConfig),
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let common = |f: Flags| Common { seed: f.seed, out: f.out };
    match cli.command {
        Command::Diagonalize { hamiltonian, flags } => commands::diagonalize_file(&hamiltonian, &common(flags)),
        Command::Series(c) => commands::series(&c.config, &common(c.flags)),
        Command::Stochastic(c) => commands::stochastic(&c.config, &common(c.flags)),
        Command::Spectrum(c) => commands::spectrum(&c.config, &common(c.flags)),
        Command::SynthCount(c) => commands::synth_count(&c.config, &common(c.flags)),
        Command::Route(c) => commands::route_circuit(&c.config, &common(c.flags)),
        Command::Fidelity(c) => commands::fidelity(&c.config, &common(c.flags)),
        Command::MmsLifetime(c) => commands::mms_lifetime(&c.config, &common(c.flags)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
