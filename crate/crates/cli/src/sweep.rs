//! Parameter sweeps over the steady cycle, emitted as CSV.
//!
//! Each row evaluates the exact cycle at one value of the swept scalar.
//! Columns: `value,work,q_hot,q_cold,efficiency,mode,clausius_r1,entropy_production`.
//! The efficiency field is left blank outside engine mode. The last column
//! recomputes entropy production from the heats (`-Q_h/T_h - Q_c/T_c`),
//! a route independent of `clausius_r1`, so the two columns cross-check
//! each other row by row.

use swap_engine::thermo::{cycle_observables, Mode};
use swap_engine::{BathSpec, CycleParams};

use crate::config::{SweepParameter, SweepSection};
use crate::output::fmt_f64;
use crate::CliError;

/// CSV header line (no trailing newline).
pub const SWEEP_HEADER: &str =
    "value,work,q_hot,q_cold,efficiency,mode,clausius_r1,entropy_production";

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub work: f64,
    pub q_hot: f64,
    pub q_cold: f64,
    pub efficiency: Option<f64>,
    pub mode: Mode,
    pub clausius_r1: f64,
    pub entropy_production: f64,
}

impl SweepRow {
    /// Renders the row as one CSV line (no trailing newline).
    pub fn to_csv(&self) -> String {
        let eta = self.efficiency.map(fmt_f64).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_f64(self.value),
            fmt_f64(self.work),
            fmt_f64(self.q_hot),
            fmt_f64(self.q_cold),
            eta,
            self.mode.as_str(),
            fmt_f64(self.clausius_r1),
            fmt_f64(self.entropy_production),
        )
    }
}

/// The evenly spaced grid `lo..=hi` with `steps` points; the endpoints are
/// hit exactly.
pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    debug_assert!(steps >= 2 && lo < hi);
    let denom = (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            if k == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / denom
            }
        })
        .collect()
}

/// Realizes the machine at one swept value.
///
/// * `cold_gap_scale` rescales the cold gaps about the first level:
///   `E_i -> E_0 + v (E_i - E_0)`.
/// * `compression` replaces the hot spectrum by `v * E_cold` (hot
///   temperature kept).
/// * `x` / `r` replace the corresponding collision parameter.
/// * `beta_c` / `beta_h` replace the corresponding inverse temperature.
fn realize(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
    parameter: SweepParameter,
    v: f64,
) -> Result<(BathSpec, BathSpec, CycleParams), CliError> {
    let out = match parameter {
        SweepParameter::ColdGapScale => {
            let e0 = cold.energies()[0];
            let scaled: Vec<f64> = cold.energies().iter().map(|e| e0 + v * (e - e0)).collect();
            (cold.with_energies(scaled)?, hot.clone(), *params)
        }
        SweepParameter::Compression => {
            let scaled: Vec<f64> = cold.energies().iter().map(|e| v * e).collect();
            (cold.clone(), hot.with_energies(scaled)?, *params)
        }
        SweepParameter::X => (cold.clone(), hot.clone(), CycleParams::new(v, params.r())?),
        SweepParameter::R => (cold.clone(), hot.clone(), CycleParams::new(params.x(), v)?),
        SweepParameter::BetaC => (
            BathSpec::new(cold.energies().to_vec(), v, cold.label())?,
            hot.clone(),
            *params,
        ),
        SweepParameter::BetaH => (
            cold.clone(),
            BathSpec::new(hot.energies().to_vec(), v, hot.label())?,
            *params,
        ),
    };
    Ok(out)
}

/// Evaluates the sweep; any failure at a point aborts with its value in
/// the message.
pub fn sweep_rows(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
    section: &SweepSection,
) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::with_capacity(section.steps);
    for v in grid(section.lo, section.hi, section.steps) {
        let point = (|| -> Result<SweepRow, CliError> {
            let (c, h, p) = realize(cold, hot, params, section.parameter, v)?;
            let report = cycle_observables(&c, &h, &p)?;
            let t_c = c.temperature()?;
            let t_h = h.temperature()?;
            Ok(SweepRow {
                value: v,
                work: report.work,
                q_hot: report.q_hot,
                q_cold: report.q_cold,
                efficiency: report.efficiency,
                mode: report.mode,
                clausius_r1: report.clausius,
                entropy_production: -report.q_hot / t_h - report.q_cold / t_c,
            })
        })()
        .map_err(|e| e.with_context(format!("sweep {} = {v}", section.parameter.as_str())))?;
        rows.push(point);
    }
    Ok(rows)
}

/// Renders header plus rows, LF line endings, trailing newline.
pub fn sweep_csv(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
    section: &SweepSection,
) -> Result<String, CliError> {
    let rows = sweep_rows(cold, hot, params, section)?;
    let mut out = String::with_capacity((rows.len() + 1) * 160);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use swap_engine::regimes::uniform_compression_classify;
    use swap_engine::BathLabel;

    fn fixture() -> (BathSpec, BathSpec, CycleParams) {
        let cold = BathSpec::new(vec![0.0, 1.0], 1.0, BathLabel::Cold).unwrap();
        let hot = BathSpec::new(vec![0.0, 2.0], 0.5, BathLabel::Hot).unwrap();
        (cold, hot, CycleParams::new(0.5, 1.0).unwrap())
    }

    fn section(parameter: SweepParameter, lo: f64, hi: f64, steps: usize) -> SweepSection {
        SweepSection {
            parameter,
            lo,
            hi,
            steps,
        }
    }

    #[test]
    fn grid_hits_endpoints_exactly() {
        let g = grid(0.1, 3.0, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[199], 3.0);
        for w in g.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn two_steps_give_exactly_two_rows() {
        let (cold, hot, params) = fixture();
        let csv = sweep_csv(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::X, 0.2, 0.8, 2),
        )
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], SWEEP_HEADER);
        assert!(lines[1].starts_with("2.0000000000000001e-1,"));
        assert!(lines[2].starts_with("8.0000000000000004e-1,"));
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn gap_sweep_partitions_into_modes_with_blank_efficiency_outside_engine() {
        let (cold, hot, params) = fixture();
        let rows = sweep_rows(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::ColdGapScale, 0.1, 3.0, 100),
        )
        .unwrap();
        let mut seen = Vec::new();
        for row in &rows {
            if seen.last() != Some(&row.mode) {
                seen.push(row.mode);
            }
            match row.mode {
                Mode::Engine => assert!(row.efficiency.is_some()),
                _ => assert!(row.efficiency.is_none()),
            }
            // Independent entropy-production route agrees with R_1.
            assert!(
                (row.clausius_r1 - row.entropy_production).abs() <= 1e-12,
                "{} vs {}",
                row.clausius_r1,
                row.entropy_production
            );
            assert!(row.entropy_production >= -1e-12);
        }
        assert_eq!(seen, vec![Mode::Refrigerator, Mode::Engine, Mode::Heater]);
    }

    #[test]
    fn work_grows_with_swap_weight_in_engine_mode() {
        let (mut cold, hot, params) = fixture();
        cold = cold.with_energies(vec![0.0, 1.5]).unwrap();
        let rows = sweep_rows(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::X, 0.05, 0.95, 10),
        )
        .unwrap();
        for w in rows.windows(2) {
            assert!(w[1].work > w[0].work);
            assert_eq!(w[0].mode, Mode::Engine);
        }
    }

    #[test]
    fn compression_sweep_matches_the_classifier() {
        let cold = BathSpec::new(vec![0.0, 0.7, 1.0], 1.2, BathLabel::Cold).unwrap();
        let hot = BathSpec::new(vec![0.0, 0.1, 0.2], 0.4, BathLabel::Hot).unwrap();
        let params = CycleParams::new(0.6, 0.9).unwrap();
        let rows = sweep_rows(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::Compression, 0.4, 4.0, 37),
        )
        .unwrap();
        let ratio = 1.2 / 0.4;
        let mut compared = 0;
        for row in &rows {
            // The classifier snaps to Degenerate within 1e-12 of the two
            // boundaries; stay clear of them for the exact comparison.
            if (row.value - 1.0).abs() < 1e-9 || (row.value - ratio).abs() < 1e-9 {
                continue;
            }
            let predicted = uniform_compression_classify(row.value, 1.2, 0.4).unwrap();
            assert_eq!(row.mode, predicted, "at compression {}", row.value);
            compared += 1;
        }
        assert!(compared >= 30, "only {compared} off-boundary points");
    }

    #[test]
    fn beta_sweeps_realize_new_temperatures() {
        let (cold, hot, params) = fixture();
        let rows = sweep_rows(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::BetaH, 0.1, 0.9, 5),
        )
        .unwrap();
        assert_eq!(rows.len(), 5);
        // Hotter hot bath (smaller beta_h) means more entropy production
        // headroom; just confirm rows evaluate and stay consistent.
        for row in &rows {
            assert!((row.clausius_r1 - row.entropy_production).abs() <= 1e-12);
        }
        // Sweeping beta_h above beta_c must fail as a domain error.
        let err = sweep_rows(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::BetaH, 0.5, 2.0, 4),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Domain { .. }));
        assert!(err.to_string().contains("beta_h ="), "{err}");
    }

    #[test]
    fn out_of_range_x_is_a_domain_error_with_context() {
        let (cold, hot, params) = fixture();
        let err = sweep_rows(
            &cold,
            &hot,
            &params,
            &section(SweepParameter::X, 0.5, 1.5, 3),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Domain { .. }));
        assert!(err.to_string().contains("sweep x = 1"), "{err}");
    }

    #[test]
    fn csv_is_deterministic() {
        let (cold, hot, params) = fixture();
        let s = section(SweepParameter::ColdGapScale, 0.1, 3.0, 20);
        let a = sweep_csv(&cold, &hot, &params, &s).unwrap();
        let b = sweep_csv(&cold, &hot, &params, &s).unwrap();
        assert_eq!(a, b);
    }
}
