//! Subcommand implementations, kept binary-free so they stay testable.

use std::path::Path;

use crate::config::{parse_config, FileConfig};
use crate::fuzz::fuzz_campaign;
use crate::output::to_json;
use crate::payload::{mc_payload, steady_payload, UltraHotPayload};
use crate::sweep::sweep_csv;
use crate::CliError;

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config '{}': {e}", path.display()))
    })?;
    parse_config(&text, &path.display().to_string())
}

/// `steady`: exact cycle report as JSON.
pub fn cmd_steady(cfg: &FileConfig) -> Result<String, CliError> {
    let (cold, hot) = cfg.baths()?;
    let params = cfg.cycle_params()?;
    to_json(&steady_payload(&cold, &hot, &params)?)
}

/// `sweep`: exact parameter sweep as CSV.
pub fn cmd_sweep(cfg: &FileConfig) -> Result<String, CliError> {
    let (cold, hot) = cfg.baths()?;
    let params = cfg.cycle_params()?;
    let section = cfg.sweep_section()?;
    sweep_csv(&cold, &hot, &params, &section)
}

/// `fuzz`: invariant campaign as JSON plus the violation count.
pub fn cmd_fuzz(seed: u64, n: usize, max_levels: usize) -> Result<(String, usize), CliError> {
    let payload = fuzz_campaign(seed, n, max_levels)?;
    let text = to_json(&payload)?;
    Ok((text, payload.total_failures))
}

/// `mc`: stochastic trajectory summary as JSON.
pub fn cmd_mc(
    cfg: &FileConfig,
    seed_override: Option<u64>,
    cycles_override: Option<usize>,
) -> Result<String, CliError> {
    let config = cfg.sim_config(seed_override, cycles_override)?;
    let trajectory = swap_engine::montecarlo::simulate(&config)?;
    to_json(&mc_payload(&config, &trajectory)?)
}

/// `ultrahot`: flat-expansion summary as JSON.
pub fn cmd_ultrahot(cfg: &FileConfig) -> Result<String, CliError> {
    let (cold, hot) = cfg.baths()?;
    let params = cfg.cycle_params()?;
    let report = swap_engine::regimes::ultra_hot_report(&cold, &hot, &params)?;
    to_json(&UltraHotPayload::from(&report))
}
