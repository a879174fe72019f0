//! Serializable views of core results.
//!
//! Field declaration order fixes the JSON key order, so output stays
//! byte-stable across runs. Non-finite floats are mapped to `null`.

use serde::Serialize;

use swap_engine::bounds::{self, BoundOutcome, BoundReport, Locality};
use swap_engine::montecarlo::{SimConfig, Trajectory, RNG_ALGORITHM};
use swap_engine::regimes::UltraHotReport;
use swap_engine::statekit::gibbs_population;
use swap_engine::thermo::{
    self, clausius_number, purity_change_lower_bound, CycleReport,
};
use swap_engine::{BathSpec, CycleParams, Error};

use crate::output::finite;
use crate::CliError;

/// One evaluated inequality.
#[derive(Debug, Serialize)]
pub struct BoundPayload {
    pub name: &'static str,
    pub value: f64,
    pub actual: f64,
    pub satisfied: bool,
    pub locality: &'static str,
}

impl From<&BoundReport> for BoundPayload {
    fn from(r: &BoundReport) -> Self {
        BoundPayload {
            name: r.name,
            value: r.value,
            actual: r.actual,
            satisfied: r.satisfied,
            locality: match r.locality {
                Locality::Local => "local",
                Locality::Nonlocal => "nonlocal",
            },
        }
    }
}

/// An inequality that may have been skipped for failed preconditions.
#[derive(Debug, Serialize)]
pub struct BoundEntryPayload {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locality: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl From<&BoundOutcome> for BoundEntryPayload {
    fn from(outcome: &BoundOutcome) -> Self {
        match outcome {
            BoundOutcome::Evaluated(r) => {
                let b = BoundPayload::from(r);
                BoundEntryPayload {
                    name: b.name,
                    value: Some(b.value),
                    actual: Some(b.actual),
                    satisfied: Some(b.satisfied),
                    locality: Some(b.locality),
                    skipped: None,
                }
            }
            BoundOutcome::Skipped { name, reason } => BoundEntryPayload {
                name,
                value: None,
                actual: None,
                satisfied: None,
                locality: None,
                skipped: Some(reason.clone()),
            },
        }
    }
}

/// Steady cycle corners.
#[derive(Debug, Serialize)]
pub struct SteadyStatePayload {
    pub p_a: Vec<f64>,
    pub p_c: Vec<f64>,
    pub dp: Vec<f64>,
}

/// Purity backreaction of the scattered bath particles.
#[derive(Debug, Serialize)]
pub struct PurityPayload {
    pub delta_p_hot: f64,
    pub delta_p_cold: f64,
    pub total: f64,
    pub lower_bound: f64,
}

/// Necessary operating-mode conditions.
#[derive(Debug, Serialize)]
pub struct NecessaryPayload {
    /// `null` when a temperature is undefined (`beta = 0`).
    pub engine: Option<BoundPayload>,
    pub refrigerator: BoundPayload,
}

/// Full steady-cycle report.
#[derive(Debug, Serialize)]
pub struct SteadyPayload {
    pub mode: &'static str,
    pub work: f64,
    pub q_hot: f64,
    pub q_cold: f64,
    /// `null` outside engine mode.
    pub efficiency: Option<f64>,
    /// `null` when a bath sits at `beta = 0`.
    pub carnot: Option<f64>,
    pub clausius_r1: f64,
    /// Third Clausius number; `null` at `beta = 0`.
    pub clausius_r3: Option<f64>,
    /// Fifth Clausius number; `null` at `beta = 0`.
    pub clausius_r5: Option<f64>,
    /// `-Q_h/T_h - Q_c/T_c`, computed from the heats independently of
    /// `clausius_r1`; `null` at `beta = 0`.
    pub entropy_production: Option<f64>,
    pub ultra_hot: bool,
    pub x_tilde: f64,
    pub steady: SteadyStatePayload,
    pub purity: PurityPayload,
    pub necessary_conditions: NecessaryPayload,
    pub work_bounds: Vec<BoundEntryPayload>,
    /// `null` outside engine mode and at `beta = 0` (no Carnot reference).
    pub efficiency_bounds: Option<Vec<BoundPayload>>,
}

/// Maps `Err(UltraHotTemperature)` to `None`, keeping other errors.
fn optional_at_ultra_hot<T>(result: Result<T, Error>) -> Result<Option<T>, CliError> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(Error::UltraHotTemperature) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Builds the full steady payload for a bath pair.
pub fn steady_payload(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
) -> Result<SteadyPayload, CliError> {
    let report: CycleReport = thermo::cycle_observables(cold, hot, params)?;
    let purity = thermo::purity_change(cold, hot, params)?;
    let lower_bound = purity_change_lower_bound(cold, hot, params)?;
    let work_outcomes = bounds::work_bounds(cold, hot, params)?;
    let efficiency_bounds = if report.mode == thermo::Mode::Engine {
        // An ultra-hot bath can still drive an engine, but the efficiency
        // ladder compares against Carnot and needs finite temperatures.
        optional_at_ultra_hot(bounds::efficiency_bounds(cold, hot, params))?
            .map(|reps| reps.iter().map(BoundPayload::from).collect())
    } else {
        None
    };
    let engine_cond = optional_at_ultra_hot(bounds::engine_necessary_condition(cold, hot))?;
    let refrigerator_cond = bounds::refrigerator_necessary_condition(cold, hot)?;

    let carnot = match (cold.temperature(), hot.temperature()) {
        (Ok(t_c), Ok(t_h)) => Some(1.0 - t_c / t_h),
        _ => None,
    };
    let entropy_production = match (cold.temperature(), hot.temperature()) {
        (Ok(t_c), Ok(t_h)) => Some(-report.q_hot / t_h - report.q_cold / t_c),
        _ => None,
    };
    let clausius_r3 = optional_at_ultra_hot(clausius_number(cold, hot, params, 2))?;
    let clausius_r5 = optional_at_ultra_hot(clausius_number(cold, hot, params, 3))?;

    Ok(SteadyPayload {
        mode: report.mode.as_str(),
        work: report.work,
        q_hot: report.q_hot,
        q_cold: report.q_cold,
        efficiency: report.efficiency,
        carnot,
        clausius_r1: report.clausius,
        clausius_r3,
        clausius_r5,
        entropy_production,
        ultra_hot: report.ultra_hot,
        x_tilde: params.x_tilde(),
        steady: SteadyStatePayload {
            p_a: report.steady.p_a.as_slice().to_vec(),
            p_c: report.steady.p_c.as_slice().to_vec(),
            dp: report.steady.dp.as_slice().to_vec(),
        },
        purity: PurityPayload {
            delta_p_hot: purity.delta_p_hot,
            delta_p_cold: purity.delta_p_cold,
            total: purity.total,
            lower_bound,
        },
        necessary_conditions: NecessaryPayload {
            engine: engine_cond.as_ref().map(BoundPayload::from),
            refrigerator: BoundPayload::from(&refrigerator_cond),
        },
        work_bounds: work_outcomes.iter().map(BoundEntryPayload::from).collect(),
        efficiency_bounds,
    })
}

/// Closed-form reference next to sampled estimates.
#[derive(Debug, Serialize)]
pub struct ClosedFormPayload {
    pub work: f64,
    pub p_a: Vec<f64>,
    pub p_c: Vec<f64>,
    /// `(mean_work - work) / stderr_work`; `null` when the standard
    /// error vanishes.
    pub z_score_work: Option<f64>,
}

/// Trajectory summary of a stochastic run.
#[derive(Debug, Serialize)]
pub struct McPayload {
    pub rng: &'static str,
    pub seed: u64,
    pub cycles_measured: usize,
    pub burn_in: usize,
    pub collisions_per_stroke: usize,
    pub mean_work: f64,
    pub stderr_work: f64,
    pub mean_q_hot: f64,
    pub mean_q_cold: f64,
    pub mean_p_a: Vec<f64>,
    pub mean_p_c: Vec<f64>,
    pub stderr_p_a: Vec<f64>,
    pub stderr_p_c: Vec<f64>,
    pub energy_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_cycle_work: Option<Vec<f64>>,
    pub closed_form: ClosedFormPayload,
}

/// Assembles the simulation payload, including the closed-form reference
/// at the effective per-stroke swap weight.
pub fn mc_payload(config: &SimConfig, trajectory: &Trajectory) -> Result<McPayload, CliError> {
    let effective = CycleParams::new(config.stroke_swap_weight(), 1.0)?;
    let p_c_gibbs = gibbs_population(&config.cold);
    let p_h_gibbs = gibbs_population(&config.hot);
    let steady =
        swap_engine::cycle::steady_populations(&p_c_gibbs, &p_h_gibbs, &effective)?;
    let gap_work: f64 = steady
        .dp
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, d)| d * (config.hot.energies()[i] - config.cold.energies()[i]))
        .sum();
    let z_score_work = if trajectory.stderr_work > 0.0 {
        finite((trajectory.mean_work - gap_work) / trajectory.stderr_work)
    } else {
        None
    };
    Ok(McPayload {
        rng: RNG_ALGORITHM,
        seed: config.seed,
        cycles_measured: trajectory.cycles_measured,
        burn_in: config.burn_in,
        collisions_per_stroke: config.collisions_per_stroke,
        mean_work: trajectory.mean_work,
        stderr_work: trajectory.stderr_work,
        mean_q_hot: trajectory.mean_q_hot,
        mean_q_cold: trajectory.mean_q_cold,
        mean_p_a: trajectory.mean_p_a.clone(),
        mean_p_c: trajectory.mean_p_c.clone(),
        stderr_p_a: trajectory.stderr_p_a.clone(),
        stderr_p_c: trajectory.stderr_p_c.clone(),
        energy_drift: trajectory.energy_drift,
        per_cycle_work: trajectory.per_cycle_work.clone(),
        closed_form: ClosedFormPayload {
            work: gap_work,
            p_a: steady.p_a.as_slice().to_vec(),
            p_c: steady.p_c.as_slice().to_vec(),
            z_score_work,
        },
    })
}

/// Geometric engine condition of the flat expansion.
#[derive(Debug, Serialize)]
pub struct EngineConditionPayload {
    pub holds: bool,
    pub overlap: f64,
    pub threshold: f64,
    pub norm_ratio: f64,
    pub ratio_window_lo: f64,
    /// `null` when the window is unbounded above (`beta_h = 0`).
    pub ratio_window_hi: Option<f64>,
}

/// Entropy production, expansion vs exact.
#[derive(Debug, Serialize)]
pub struct UltraHotClausiusPayload {
    pub approx: f64,
    pub exact: f64,
}

/// Flat-expansion summary.
#[derive(Debug, Serialize)]
pub struct UltraHotPayload {
    pub work_approx: f64,
    pub work_exact: f64,
    pub abs_err: f64,
    /// `null` when the exact work vanishes but the expansion does not.
    pub rel_err: Option<f64>,
    pub smallness: f64,
    pub valid: bool,
    pub engine_condition: EngineConditionPayload,
    pub clausius: UltraHotClausiusPayload,
}

impl From<&UltraHotReport> for UltraHotPayload {
    fn from(r: &UltraHotReport) -> Self {
        UltraHotPayload {
            work_approx: r.work_approx,
            work_exact: r.work_exact,
            abs_err: r.abs_err,
            rel_err: finite(r.rel_err),
            smallness: r.smallness,
            valid: r.valid,
            engine_condition: EngineConditionPayload {
                holds: r.engine_condition.holds,
                overlap: r.engine_condition.overlap,
                threshold: r.engine_condition.threshold,
                norm_ratio: r.engine_condition.norm_ratio,
                ratio_window_lo: r.engine_condition.ratio_window.0,
                ratio_window_hi: finite(r.engine_condition.ratio_window.1),
            },
            clausius: UltraHotClausiusPayload {
                approx: r.clausius.approx,
                exact: r.clausius.exact,
            },
        }
    }
}
