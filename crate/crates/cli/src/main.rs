//! `swapcli` binary: argument parsing and exit-code mapping.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use swap_engine_cli::output::emit;
use swap_engine_cli::{commands, fuzz, CliError};

/// Exact and stochastic analysis of a multilevel partial-swap heat machine.
#[derive(Parser)]
#[command(name = "swapcli", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact steady-cycle report (JSON)
    Steady {
        /// Machine description file
        #[arg(long)]
        config: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact parameter sweep (CSV)
    Sweep {
        /// Machine description file with a [sweep] section
        #[arg(long)]
        config: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized invariant campaign (JSON; exits 1 on any violation)
    Fuzz {
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random machines
        #[arg(long, default_value_t = fuzz::DEFAULT_INSTANCES)]
        n: usize,
        /// Largest level count sampled
        #[arg(long, default_value_t = fuzz::DEFAULT_MAX_LEVELS)]
        max_levels: usize,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stochastic trajectory simulation (JSON)
    Mc {
        /// Machine description file with a [sim] section
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from [sim]
        #[arg(long)]
        seed: Option<u64>,
        /// Override the cycle count from [sim]
        #[arg(long)]
        n: Option<usize>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flat-spectrum expansion next to the exact cycle (JSON)
    Ultrahot {
        /// Machine description file
        #[arg(long)]
        config: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Steady { config, out } => {
            let cfg = commands::load_config(&config)?;
            emit(&commands::cmd_steady(&cfg)?, out.as_deref())?;
            Ok(0)
        }
        Command::Sweep { config, out } => {
            let cfg = commands::load_config(&config)?;
            emit(&commands::cmd_sweep(&cfg)?, out.as_deref())?;
            Ok(0)
        }
        Command::Fuzz {
            seed,
            n,
            max_levels,
            out,
        } => {
            let (text, failures) = commands::cmd_fuzz(seed, n, max_levels)?;
            emit(&text, out.as_deref())?;
            Ok(if failures > 0 { 1 } else { 0 })
        }
        Command::Mc {
            config,
            seed,
            n,
            out,
        } => {
            let cfg = commands::load_config(&config)?;
            emit(&commands::cmd_mc(&cfg, seed, n)?, out.as_deref())?;
            Ok(0)
        }
        Command::Ultrahot { config, out } => {
            let cfg = commands::load_config(&config)?;
            emit(&commands::cmd_ultrahot(&cfg)?, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
