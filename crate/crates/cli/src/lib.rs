//! `swapcli` — command-line front end for the `swap-engine` library.
//!
//! Subcommands:
//!
//! * `steady`   — exact steady-cycle report (JSON).
//! * `sweep`    — parameter sweep over the exact cycle (CSV).
//! * `fuzz`     — randomized invariant campaign (JSON; exit 1 on violation).
//! * `mc`       — stochastic trajectory simulation (JSON).
//! * `ultrahot` — flat-spectrum expansion versus the exact cycle (JSON).
//!
//! Output is deterministic: identical inputs and seeds produce
//! byte-identical bytes, and every float carries 17 significant digits.
//!
//! Exit codes: `0` success, `1` invariant violation found by `fuzz`,
//! `2` configuration or usage error, `3` domain error (a computation was
//! asked outside its validity region).

pub mod commands;
pub mod config;
pub mod fuzz;
pub mod output;
pub mod payload;
pub mod sweep;

use thiserror::Error;

fn prefix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!("{c}: "),
        None => String::new(),
    }
}

/// CLI-level error; the variant decides the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration file, bad flag combination, or I/O failure:
    /// exit code 2.
    #[error("{0}")]
    Config(String),
    /// A computation was rejected by the core library: exit code 3.
    #[error("{ctx}{source}", ctx = prefix(.context))]
    Domain {
        /// Where the rejection happened (e.g. which sweep point).
        context: Option<String>,
        source: swap_engine::Error,
    },
    /// Invariant violations found by the fuzz campaign: exit code 1.
    #[error("{0} invariant violation(s) found")]
    Invariant(usize),
}

impl CliError {
    /// Attaches a context prefix to domain errors, leaving others as-is.
    pub fn with_context(self, context: String) -> CliError {
        match self {
            CliError::Domain { source, .. } => CliError::Domain {
                context: Some(context),
                source,
            },
            other => other,
        }
    }

    /// The process exit code mandated for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) => 2,
            CliError::Domain { .. } => 3,
        }
    }
}

impl From<swap_engine::Error> for CliError {
    fn from(e: swap_engine::Error) -> Self {
        CliError::Domain {
            context: None,
            source: e,
        }
    }
}
