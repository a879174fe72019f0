//! Flat key-value configuration files.
//!
//! The format is a minimal INI dialect: `[section]` headers, `key = value`
//! pairs, `#` or `;` comments, blank lines ignored. Recognized sections
//! and keys:
//!
//! ```text
//! [cold] / [hot]   energies = 0.0, 1.5      beta = 1.0
//! [params]         x = 0.5                  r = 1.0
//! [sim]            cycles = 100000          burn_in = 1000
//!                  seed = 42                collisions_per_stroke = 1
//!                  record_per_cycle = false
//! [sweep]          parameter = cold_gap_scale
//!                  lo = 0.1    hi = 3.0     steps = 200
//! ```
//!
//! Every parse failure carries the file label and 1-based line number.

use crate::CliError;
use swap_engine::montecarlo::SimConfig;
use swap_engine::{BathLabel, BathSpec, CycleParams};

/// One bath section.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSection {
    pub energies: Vec<f64>,
    pub beta: f64,
}

/// The `[params]` section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsSection {
    pub x: f64,
    pub r: f64,
}

/// The `[sim]` section with defaults applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSection {
    pub cycles: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub collisions_per_stroke: usize,
    pub record_per_cycle: bool,
}

/// Which scalar a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Scale the cold gaps: `E_i -> E_0 + value (E_i - E_0)`.
    ColdGapScale,
    /// Replace the hot spectrum by `value * E_cold`.
    Compression,
    /// Swap weight `x`.
    X,
    /// Unitary overlap `r`.
    R,
    /// Cold inverse temperature.
    BetaC,
    /// Hot inverse temperature.
    BetaH,
}

impl SweepParameter {
    /// The wire name used in config files and documentation.
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::ColdGapScale => "cold_gap_scale",
            SweepParameter::Compression => "compression",
            SweepParameter::X => "x",
            SweepParameter::R => "r",
            SweepParameter::BetaC => "beta_c",
            SweepParameter::BetaH => "beta_h",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "cold_gap_scale" => Some(SweepParameter::ColdGapScale),
            "compression" => Some(SweepParameter::Compression),
            "x" => Some(SweepParameter::X),
            "r" => Some(SweepParameter::R),
            "beta_c" => Some(SweepParameter::BetaC),
            "beta_h" => Some(SweepParameter::BetaH),
            _ => None,
        }
    }
}

/// The `[sweep]` section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

/// A parsed configuration file; sections are present only if written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub cold: Option<BathSection>,
    pub hot: Option<BathSection>,
    pub params: Option<ParamsSection>,
    pub sim: Option<SimSection>,
    pub sweep: Option<SweepSection>,
}

fn config_err(label: &str, line: usize, msg: impl AsRef<str>) -> CliError {
    CliError::Config(format!("{label}:{line}: {}", msg.as_ref()))
}

fn parse_f64(label: &str, line: usize, key: &str, value: &str) -> Result<f64, CliError> {
    value.parse::<f64>().map_err(|_| {
        config_err(label, line, format!("key '{key}' needs a number, got '{value}'"))
    })
}

fn parse_usize(label: &str, line: usize, key: &str, value: &str) -> Result<usize, CliError> {
    value.parse::<usize>().map_err(|_| {
        config_err(
            label,
            line,
            format!("key '{key}' needs a non-negative integer, got '{value}'"),
        )
    })
}

fn parse_bool(label: &str, line: usize, key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config_err(
            label,
            line,
            format!("key '{key}' needs true/false, got '{value}'"),
        )),
    }
}

fn parse_energy_list(label: &str, line: usize, value: &str) -> Result<Vec<f64>, CliError> {
    let items: Result<Vec<f64>, CliError> = value
        .split(',')
        .map(|piece| {
            let piece = piece.trim();
            piece.parse::<f64>().map_err(|_| {
                config_err(label, line, format!("bad energy entry '{piece}'"))
            })
        })
        .collect();
    items
}

#[derive(Default)]
struct RawSection {
    entries: Vec<(usize, String, String)>,
}

impl RawSection {
    fn take(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(line, _, v)| (*line, v.as_str()))
    }

    fn require(&self, label: &str, section: &str, key: &str) -> Result<(usize, &str), CliError> {
        self.take(key).ok_or_else(|| {
            CliError::Config(format!(
                "{label}: section [{section}] is missing required key '{key}'"
            ))
        })
    }

    fn reject_unknown(
        &self,
        label: &str,
        section: &str,
        known: &[&str],
    ) -> Result<(), CliError> {
        for (line, key, _) in &self.entries {
            if !known.contains(&key.as_str()) {
                return Err(config_err(
                    label,
                    *line,
                    format!("unknown key '{key}' in section [{section}]"),
                ));
            }
        }
        Ok(())
    }
}

/// Parses `text`; `label` (usually the path) prefixes every error.
pub fn parse_config(text: &str, label: &str) -> Result<FileConfig, CliError> {
    let mut sections: Vec<(String, RawSection)> = Vec::new();
    let mut current: Option<usize> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find(['#', ';']) {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| config_err(label, line_no, "unterminated section header"))?
                .trim()
                .to_string();
            if !["cold", "hot", "params", "sim", "sweep"].contains(&name.as_str()) {
                return Err(config_err(label, line_no, format!("unknown section [{name}]")));
            }
            if sections.iter().any(|(n, _)| *n == name) {
                return Err(config_err(label, line_no, format!("duplicate section [{name}]")));
            }
            sections.push((name, RawSection::default()));
            current = Some(sections.len() - 1);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(label, line_no, format!("expected 'key = value', got '{line}'"))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let section = match current {
            Some(i) => &mut sections[i].1,
            None => {
                return Err(config_err(
                    label,
                    line_no,
                    format!("key '{key}' appears before any [section]"),
                ))
            }
        };
        if section.entries.iter().any(|(_, k, _)| *k == key) {
            return Err(config_err(label, line_no, format!("duplicate key '{key}'")));
        }
        section.entries.push((line_no, key, value));
    }

    let mut config = FileConfig::default();
    for (name, raw) in &sections {
        match name.as_str() {
            "cold" | "hot" => {
                raw.reject_unknown(label, name, &["energies", "beta"])?;
                let (eline, evalue) = raw.require(label, name, "energies")?;
                let (bline, bvalue) = raw.require(label, name, "beta")?;
                let section = BathSection {
                    energies: parse_energy_list(label, eline, evalue)?,
                    beta: parse_f64(label, bline, "beta", bvalue)?,
                };
                if name == "cold" {
                    config.cold = Some(section);
                } else {
                    config.hot = Some(section);
                }
            }
            "params" => {
                raw.reject_unknown(label, name, &["x", "r"])?;
                let (xline, xvalue) = raw.require(label, name, "x")?;
                let r = match raw.take("r") {
                    Some((rline, rvalue)) => parse_f64(label, rline, "r", rvalue)?,
                    None => 1.0,
                };
                config.params = Some(ParamsSection {
                    x: parse_f64(label, xline, "x", xvalue)?,
                    r,
                });
            }
            "sim" => {
                raw.reject_unknown(
                    label,
                    name,
                    &[
                        "cycles",
                        "burn_in",
                        "seed",
                        "collisions_per_stroke",
                        "record_per_cycle",
                    ],
                )?;
                let (cline, cvalue) = raw.require(label, name, "cycles")?;
                let cycles = parse_usize(label, cline, "cycles", cvalue)?;
                let burn_in = match raw.take("burn_in") {
                    Some((l, v)) => parse_usize(label, l, "burn_in", v)?,
                    None => 1000,
                };
                let seed = match raw.take("seed") {
                    Some((l, v)) => v.parse::<u64>().map_err(|_| {
                        config_err(label, l, format!("key 'seed' needs a u64, got '{v}'"))
                    })?,
                    None => 0,
                };
                let collisions_per_stroke = match raw.take("collisions_per_stroke") {
                    Some((l, v)) => parse_usize(label, l, "collisions_per_stroke", v)?,
                    None => 1,
                };
                let record_per_cycle = match raw.take("record_per_cycle") {
                    Some((l, v)) => parse_bool(label, l, "record_per_cycle", v)?,
                    None => false,
                };
                config.sim = Some(SimSection {
                    cycles,
                    burn_in,
                    seed,
                    collisions_per_stroke,
                    record_per_cycle,
                });
            }
            "sweep" => {
                raw.reject_unknown(label, name, &["parameter", "lo", "hi", "steps"])?;
                let (pline, pvalue) = raw.require(label, name, "parameter")?;
                let parameter = SweepParameter::parse(pvalue).ok_or_else(|| {
                    config_err(
                        label,
                        pline,
                        format!(
                            "unknown sweep parameter '{pvalue}' (expected one of \
                             cold_gap_scale, compression, x, r, beta_c, beta_h)"
                        ),
                    )
                })?;
                let (lline, lvalue) = raw.require(label, name, "lo")?;
                let (hline, hvalue) = raw.require(label, name, "hi")?;
                let (sline, svalue) = raw.require(label, name, "steps")?;
                let lo = parse_f64(label, lline, "lo", lvalue)?;
                let hi = parse_f64(label, hline, "hi", hvalue)?;
                let steps = parse_usize(label, sline, "steps", svalue)?;
                if lo.is_nan() || hi.is_nan() || lo >= hi {
                    return Err(config_err(label, hline, "sweep needs lo < hi"));
                }
                if steps < 2 {
                    return Err(config_err(label, sline, "sweep needs steps >= 2"));
                }
                config.sweep = Some(SweepSection {
                    parameter,
                    lo,
                    hi,
                    steps,
                });
            }
            _ => unreachable!("section names are validated at the header"),
        }
    }
    Ok(config)
}

fn missing(section: &str) -> CliError {
    CliError::Config(format!("missing required section [{section}]"))
}

impl FileConfig {
    /// Builds the two bath specifications; construction failures (bad
    /// energies, negative beta) count as config errors.
    pub fn baths(&self) -> Result<(BathSpec, BathSpec), CliError> {
        let cold = self.cold.as_ref().ok_or_else(|| missing("cold"))?;
        let hot = self.hot.as_ref().ok_or_else(|| missing("hot"))?;
        let cold = BathSpec::new(cold.energies.clone(), cold.beta, BathLabel::Cold)
            .map_err(|e| CliError::Config(format!("[cold]: {e}")))?;
        let hot = BathSpec::new(hot.energies.clone(), hot.beta, BathLabel::Hot)
            .map_err(|e| CliError::Config(format!("[hot]: {e}")))?;
        Ok((cold, hot))
    }

    /// Builds the cycle parameters.
    pub fn cycle_params(&self) -> Result<CycleParams, CliError> {
        let p = self.params.as_ref().ok_or_else(|| missing("params"))?;
        CycleParams::new(p.x, p.r).map_err(|e| CliError::Config(format!("[params]: {e}")))
    }

    /// Assembles a simulation config, honoring CLI overrides.
    pub fn sim_config(
        &self,
        seed_override: Option<u64>,
        cycles_override: Option<usize>,
    ) -> Result<SimConfig, CliError> {
        let (cold, hot) = self.baths()?;
        let params = self.cycle_params()?;
        let sim = self.sim.as_ref().ok_or_else(|| missing("sim"))?;
        let config = SimConfig {
            cold,
            hot,
            params,
            n_cycles: cycles_override.unwrap_or(sim.cycles),
            burn_in: sim.burn_in,
            seed: seed_override.unwrap_or(sim.seed),
            collisions_per_stroke: sim.collisions_per_stroke,
            record_per_cycle: sim.record_per_cycle,
        };
        config
            .validate()
            .map_err(|e| CliError::Config(format!("[sim]: {e}")))?;
        Ok(config)
    }

    /// The sweep section, required.
    pub fn sweep_section(&self) -> Result<SweepSection, CliError> {
        self.sweep.ok_or_else(|| missing("sweep"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = "\
# demo machine
[cold]
energies = 0.0, 1.5
beta = 1.0

[hot]
energies = 0.0, 2.0   ; two levels
beta = 0.5

[params]
x = 0.5
r = 1.0

[sim]
cycles = 5000
burn_in = 100
seed = 9
collisions_per_stroke = 2
record_per_cycle = true

[sweep]
parameter = cold_gap_scale
lo = 0.1
hi = 3.0
steps = 200
";

    #[test]
    fn full_file_round_trips() {
        let cfg = parse_config(FULL, "demo.ini").unwrap();
        let (cold, hot) = cfg.baths().unwrap();
        assert_eq!(cold.energies(), &[0.0, 1.5]);
        assert_eq!(hot.beta(), 0.5);
        let p = cfg.cycle_params().unwrap();
        assert_eq!(p.x_tilde(), 0.5);
        let sim = cfg.sim_config(None, None).unwrap();
        assert_eq!(sim.n_cycles, 5000);
        assert_eq!(sim.seed, 9);
        assert_eq!(sim.collisions_per_stroke, 2);
        assert!(sim.record_per_cycle);
        let sweep = cfg.sweep_section().unwrap();
        assert_eq!(sweep.parameter, SweepParameter::ColdGapScale);
        assert_eq!(sweep.steps, 200);
    }

    #[test]
    fn overrides_replace_sim_values() {
        let cfg = parse_config(FULL, "demo.ini").unwrap();
        let sim = cfg.sim_config(Some(77), Some(1234)).unwrap();
        assert_eq!(sim.seed, 77);
        assert_eq!(sim.n_cycles, 1234);
    }

    #[test]
    fn errors_carry_the_line_number() {
        let bad = "[cold]\nenergies = 0.0, 1.0\nbetta = 1.0\n";
        let err = parse_config(bad, "bad.ini").unwrap_err().to_string();
        assert!(err.contains("bad.ini:3"), "{err}");
        assert!(err.contains("betta"), "{err}");

        let bad2 = "[cold]\nenergies = 0.0, oops\nbeta = 1.0\n";
        let err2 = parse_config(bad2, "bad.ini").unwrap_err().to_string();
        assert!(err2.contains("bad.ini:2"), "{err2}");

        let bad3 = "x = 0.5\n";
        let err3 = parse_config(bad3, "bad.ini").unwrap_err().to_string();
        assert!(err3.contains("before any [section]"), "{err3}");

        let bad4 = "[params]\nx = 0.5\nx = 0.6\n";
        let err4 = parse_config(bad4, "bad.ini").unwrap_err().to_string();
        assert!(err4.contains("bad.ini:3") && err4.contains("duplicate"), "{err4}");

        let bad5 = "[orbit]\nq = 1\n";
        let err5 = parse_config(bad5, "bad.ini").unwrap_err().to_string();
        assert!(err5.contains("unknown section"), "{err5}");
    }

    #[test]
    fn sweep_validation() {
        let bad = "[sweep]\nparameter = x\nlo = 2.0\nhi = 1.0\nsteps = 5\n";
        assert!(parse_config(bad, "s.ini").unwrap_err().to_string().contains("lo < hi"));
        let bad2 = "[sweep]\nparameter = x\nlo = 0.0\nhi = 1.0\nsteps = 1\n";
        assert!(parse_config(bad2, "s.ini")
            .unwrap_err()
            .to_string()
            .contains("steps >= 2"));
        let bad3 = "[sweep]\nparameter = volume\nlo = 0.0\nhi = 1.0\nsteps = 5\n";
        assert!(parse_config(bad3, "s.ini")
            .unwrap_err()
            .to_string()
            .contains("unknown sweep parameter"));
    }

    #[test]
    fn missing_sections_are_reported_on_realization() {
        let cfg = parse_config("[cold]\nenergies = 0,1\nbeta = 1\n", "p.ini").unwrap();
        let err = cfg.baths().unwrap_err().to_string();
        assert!(err.contains("[hot]"), "{err}");
        let err2 = cfg.cycle_params().unwrap_err().to_string();
        assert!(err2.contains("[params]"), "{err2}");
    }

    #[test]
    fn defaults_fill_optional_keys() {
        let text = "[cold]\nenergies = 0,1\nbeta = 1\n[hot]\nenergies = 0,2\nbeta = 0.5\n\
                    [params]\nx = 0.4\n[sim]\ncycles = 10\n";
        let cfg = parse_config(text, "d.ini").unwrap();
        let p = cfg.cycle_params().unwrap();
        assert_eq!(p.x_tilde(), 0.4); // r defaults to 1
        let sim = cfg.sim_config(None, None).unwrap();
        assert_eq!(sim.burn_in, 1000);
        assert_eq!(sim.seed, 0);
        assert_eq!(sim.collisions_per_stroke, 1);
        assert!(!sim.record_per_cycle);
    }

    #[test]
    fn bad_domain_values_are_config_errors() {
        let text = "[cold]\nenergies = 0,1\nbeta = -1\n[hot]\nenergies = 0,2\nbeta = 0.5\n";
        let cfg = parse_config(text, "d.ini").unwrap();
        let err = cfg.baths().unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }
}
