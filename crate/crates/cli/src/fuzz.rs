//! Randomized invariant campaign over the exact cycle.
//!
//! Each instance draws a random machine (level count, spectra, inverse
//! temperatures, collision parameters), evaluates every structural
//! invariant, and tallies the outcome per invariant. The first failing
//! instance of each invariant is kept as a counterexample. The campaign
//! also fits the proportionality constant of the total purity change
//! against `x (1-x) |p_h - p_c|^2 / (2-x)^2` (with the effective swap
//! weight) so the measured coefficient lands in the report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use swap_engine::bounds::{
    efficiency_bounds, engine_necessary_condition, refrigerator_necessary_condition, work_bounds,
};
use swap_engine::montecarlo::RNG_ALGORITHM;
use swap_engine::statekit::{gibbs_population, jeffreys_divergence, purity, shannon_entropy};
use swap_engine::thermo::{
    clausius_dominated_level, clausius_number, cycle_observables, purity_change,
    purity_change_lower_bound, Mode, MODE_TOL,
};
use swap_engine::{BathLabel, BathSpec, CycleParams, Error};

use crate::CliError;

/// Default number of instances.
pub const DEFAULT_INSTANCES: usize = 10_000;
/// Default cap on the number of levels.
pub const DEFAULT_MAX_LEVELS: usize = 6;

/// Exact-identity tolerance (first law).
const FIRST_LAW_TOL: f64 = 1e-10;
/// Signed floor for quantities proven nonnegative / identities in exact
/// arithmetic.
const SIGNED_TOL: f64 = 1e-12;
/// Smallest denominator accepted by the purity-coefficient fit.
const FIT_FLOOR: f64 = 1e-6;

/// A failing machine, reproduced in full.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub cold_energies: Vec<f64>,
    pub cold_beta: f64,
    pub hot_energies: Vec<f64>,
    pub hot_beta: f64,
    pub x: f64,
    pub r: f64,
    pub detail: String,
}

/// Tally for one invariant.
#[derive(Debug, Serialize)]
pub struct InvariantPayload {
    pub name: &'static str,
    /// Instances on which the invariant applied.
    pub checked: usize,
    pub passes: usize,
    pub failures: usize,
    /// First failing machine, if any.
    pub first_counterexample: Option<Counterexample>,
}

/// Fit of the purity-change proportionality constant.
#[derive(Debug, Serialize)]
pub struct PurityFitPayload {
    /// Instances whose denominator cleared the fit floor.
    pub samples: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Full campaign report.
#[derive(Debug, Serialize)]
pub struct FuzzPayload {
    pub rng: &'static str,
    pub seed: u64,
    pub instances: usize,
    pub max_levels: usize,
    pub total_failures: usize,
    pub invariants: Vec<InvariantPayload>,
    pub purity_coefficient: PurityFitPayload,
}

struct Tracker {
    name: &'static str,
    checked: usize,
    passes: usize,
    first: Option<Counterexample>,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Tracker {
            name,
            checked: 0,
            passes: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, cx: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if ok {
            self.passes += 1;
        } else if self.first.is_none() {
            self.first = Some(cx());
        }
    }

    fn failures(&self) -> usize {
        self.checked - self.passes
    }

    fn into_payload(self) -> InvariantPayload {
        InvariantPayload {
            name: self.name,
            checked: self.checked,
            passes: self.passes,
            failures: self.checked - self.passes,
            first_counterexample: self.first,
        }
    }
}

/// One sampled machine.
#[derive(Debug, Clone)]
pub(crate) struct Instance {
    pub index: usize,
    pub cold: BathSpec,
    pub hot: BathSpec,
    pub params: CycleParams,
}

impl Instance {
    fn counterexample(&self, detail: String) -> Counterexample {
        Counterexample {
            instance: self.index,
            cold_energies: self.cold.energies().to_vec(),
            cold_beta: self.cold.beta(),
            hot_energies: self.hot.energies().to_vec(),
            hot_beta: self.hot.beta(),
            x: self.params.x(),
            r: self.params.r(),
            detail,
        }
    }
}

/// Draws a machine: `N` uniform on `[2, max_levels]`, energies uniform on
/// `[0, 5]`, inverse temperatures uniform on `[0.1, 10]` (ordered so the
/// cold bath is colder), `x` and `r` on `(0, 1]`.
pub(crate) fn sample_instance(
    rng: &mut ChaCha8Rng,
    max_levels: usize,
    index: usize,
) -> Instance {
    let n = rng.random_range(2..=max_levels);
    let energies = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n).map(|_| rng.random::<f64>() * 5.0).collect()
    };
    let e_c = energies(rng);
    let e_h = energies(rng);
    let b1 = 0.1 + 9.9 * rng.random::<f64>();
    let b2 = 0.1 + 9.9 * rng.random::<f64>();
    let (beta_c, beta_h) = (b1.max(b2), b1.min(b2));
    let x = 1.0 - rng.random::<f64>();
    let r = 1.0 - rng.random::<f64>();
    Instance {
        index,
        cold: BathSpec::new(e_c, beta_c, BathLabel::Cold).expect("sampled cold bath is valid"),
        hot: BathSpec::new(e_h, beta_h, BathLabel::Hot).expect("sampled hot bath is valid"),
        params: CycleParams::new(x, r).expect("sampled params are valid"),
    }
}

struct PurityFit {
    samples: usize,
    sum: f64,
    min: f64,
    max: f64,
}

impl PurityFit {
    fn new() -> Self {
        PurityFit {
            samples: 0,
            sum: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, c: f64) {
        self.samples += 1;
        self.sum += c;
        self.min = self.min.min(c);
        self.max = self.max.max(c);
    }

    fn into_payload(self) -> PurityFitPayload {
        let mean = if self.samples > 0 {
            self.sum / self.samples as f64
        } else {
            0.0
        };
        PurityFitPayload {
            samples: self.samples,
            mean,
            min: if self.samples > 0 { self.min } else { 0.0 },
            max: if self.samples > 0 { self.max } else { 0.0 },
        }
    }
}

/// Runs the campaign. Never weakens a check: every failure is counted and
/// the first counterexample per invariant is reported verbatim.
pub fn fuzz_campaign(
    seed: u64,
    instances: usize,
    max_levels: usize,
) -> Result<FuzzPayload, CliError> {
    if max_levels < 2 {
        return Err(CliError::Config(format!(
            "--max-levels must be at least 2, got {max_levels}"
        )));
    }
    if instances == 0 {
        return Err(CliError::Config("--n must be at least 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first_law = Tracker::new("first_law");
    let mut clausius_odd = Tracker::new("clausius_odd_nonneg");
    let mut clausius_jeffreys = Tracker::new("clausius_jeffreys_identity");
    let mut dominated = Tracker::new("dominated_level_sign");
    let mut purity_nonpos = Tracker::new("purity_total_nonpositive");
    let mut purity_closed = Tracker::new("purity_closed_form");
    let mut purity_floor = Tracker::new("purity_lower_bound");
    let mut entropy_floor = Tracker::new("purity_entropy_floor");
    let mut engine_nec = Tracker::new("engine_necessary_condition");
    let mut fridge_nec = Tracker::new("refrigerator_necessary_condition");
    let mut work_ok = Tracker::new("work_bounds_hold");
    let mut eff_ok = Tracker::new("efficiency_bounds_hold");
    let mut exclusivity = Tracker::new("mode_exclusivity");
    let mut fit = PurityFit::new();

    for index in 0..instances {
        let inst = sample_instance(&mut rng, max_levels, index);
        let (cold, hot, params) = (&inst.cold, &inst.hot, &inst.params);
        let report = cycle_observables(cold, hot, params)?;

        let gap = (report.q_hot + report.q_cold - report.work).abs();
        first_law.record(gap <= FIRST_LAW_TOL, || {
            inst.counterexample(format!("Q_h + Q_c - W = {gap:e}"))
        });

        let mut odd_ok = true;
        let mut odd_detail = String::new();
        for m in [1u32, 2, 3, 5] {
            let r = clausius_number(cold, hot, params, m)?;
            if r < -SIGNED_TOL {
                odd_ok = false;
                odd_detail = format!("R at m = {m} is {r:e}");
                break;
            }
        }
        clausius_odd.record(odd_ok, || inst.counterexample(odd_detail.clone()));

        let r1 = clausius_number(cold, hot, params, 1)?;
        let p_c = gibbs_population(cold);
        let p_h = gibbs_population(hot);
        let j = jeffreys_divergence(&p_c, &p_h)?;
        let f = params.steady_prefactor();
        let jeffreys_gap = (r1 - f * j).abs();
        clausius_jeffreys.record(jeffreys_gap <= SIGNED_TOL, || {
            inst.counterexample(format!("|R_1 - f J| = {jeffreys_gap:e}"))
        });

        match clausius_dominated_level(cold, hot, params) {
            Ok(dl) => dominated.record(dl.sign_match, || {
                inst.counterexample(format!("sign mismatch at level {}", dl.index))
            }),
            Err(Error::AmbiguousMaximum { .. }) | Err(Error::ZeroChange { .. }) => {}
            Err(e) => return Err(e.into()),
        }

        let pc = purity_change(cold, hot, params)?;
        purity_nonpos.record(pc.total <= SIGNED_TOL, || {
            inst.counterexample(format!("total purity change = {:e}", pc.total))
        });

        let x_tilde = params.x_tilde();
        let dist2: f64 = p_c
            .as_slice()
            .iter()
            .zip(p_h.as_slice())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let shape = x_tilde * (1.0 - x_tilde) * dist2 / ((2.0 - x_tilde) * (2.0 - x_tilde));
        let closed = -4.0 * shape;
        let closed_gap = (pc.total - closed).abs();
        purity_closed.record(closed_gap <= SIGNED_TOL, || {
            inst.counterexample(format!("total - closed form = {closed_gap:e}"))
        });
        if shape >= FIT_FLOOR {
            fit.push(-pc.total / shape);
        }

        let floor = purity_change_lower_bound(cold, hot, params)?;
        purity_floor.record(pc.total.abs() >= floor - SIGNED_TOL, || {
            inst.counterexample(format!("|total| = {:e} < floor {floor:e}", pc.total.abs()))
        });

        let p_purity_ok = [&p_c, &p_h].iter().all(|p| {
            purity(p) >= (-shannon_entropy(p)).exp() - SIGNED_TOL
        });
        entropy_floor.record(p_purity_ok, || {
            inst.counterexample("purity fell below exp(-S)".into())
        });

        if report.mode == Mode::Engine {
            let cond = engine_necessary_condition(cold, hot)?;
            engine_nec.record(cond.satisfied, || {
                inst.counterexample(format!(
                    "engine without P_ch >= bound: {:e} < {:e}",
                    cond.actual, cond.value
                ))
            });
        }
        if report.mode == Mode::Refrigerator {
            let cond = refrigerator_necessary_condition(cold, hot)?;
            fridge_nec.record(cond.satisfied, || {
                inst.counterexample(format!(
                    "refrigerator without P_ch >= exp(-S_c): {:e} < {:e}",
                    cond.actual, cond.value
                ))
            });
        }

        let outcomes = work_bounds(cold, hot, params)?;
        let bad_bound = outcomes
            .iter()
            .filter_map(|o| o.report())
            .find(|r| !r.satisfied);
        work_ok.record(bad_bound.is_none(), || {
            let name = bad_bound.map(|r| r.name).unwrap_or("?");
            inst.counterexample(format!("work bound '{name}' violated"))
        });

        if report.mode == Mode::Engine {
            let reps = efficiency_bounds(cold, hot, params)?;
            let bad = reps.iter().find(|r| !r.satisfied);
            eff_ok.record(bad.is_none(), || {
                let name = bad.map(|r| r.name).unwrap_or("?");
                inst.counterexample(format!("efficiency bound '{name}' violated"))
            });
        }

        let both = report.work > MODE_TOL && report.q_cold > MODE_TOL;
        exclusivity.record(!both, || {
            inst.counterexample(format!(
                "engine and refrigerator at once: W = {:e}, Q_c = {:e}",
                report.work, report.q_cold
            ))
        });
    }

    let trackers = [
        first_law,
        clausius_odd,
        clausius_jeffreys,
        dominated,
        purity_nonpos,
        purity_closed,
        purity_floor,
        entropy_floor,
        engine_nec,
        fridge_nec,
        work_ok,
        eff_ok,
        exclusivity,
    ];
    let total_failures: usize = trackers.iter().map(Tracker::failures).sum();
    Ok(FuzzPayload {
        rng: RNG_ALGORITHM,
        seed,
        instances,
        max_levels,
        total_failures,
        invariants: trackers.into_iter().map(Tracker::into_payload).collect(),
        purity_coefficient: fit.into_payload(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::to_json;

    #[test]
    fn sampler_respects_the_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for index in 0..400 {
            let inst = sample_instance(&mut rng, 6, index);
            let n = inst.cold.energies().len();
            assert!((2..=6).contains(&n));
            assert_eq!(inst.hot.energies().len(), n);
            for &e in inst.cold.energies().iter().chain(inst.hot.energies()) {
                assert!((0.0..5.0).contains(&e));
            }
            assert!(inst.cold.beta() >= inst.hot.beta());
            assert!((0.1..=10.0).contains(&inst.cold.beta()));
            assert!((0.1..=10.0).contains(&inst.hot.beta()));
            assert!(inst.params.x() > 0.0 && inst.params.x() <= 1.0);
            assert!(inst.params.r() > 0.0 && inst.params.r() <= 1.0);
        }
    }

    #[test]
    fn small_campaign_is_clean_and_covers_both_modes() {
        let payload = fuzz_campaign(20260825, 400, 6).unwrap();
        assert_eq!(payload.total_failures, 0);
        for inv in &payload.invariants {
            assert_eq!(inv.failures, 0, "{}", inv.name);
            assert!(inv.first_counterexample.is_none(), "{}", inv.name);
        }
        let by_name = |name: &str| {
            payload
                .invariants
                .iter()
                .find(|i| i.name == name)
                .unwrap_or_else(|| panic!("missing invariant {name}"))
        };
        assert_eq!(by_name("first_law").checked, 400);
        assert_eq!(by_name("mode_exclusivity").checked, 400);
        assert!(by_name("engine_necessary_condition").checked > 0);
        assert!(by_name("refrigerator_necessary_condition").checked > 0);
        assert!(by_name("dominated_level_sign").checked > 350);
    }

    #[test]
    fn purity_coefficient_fit_lands_on_four() {
        let payload = fuzz_campaign(7, 600, 6).unwrap();
        let fit = &payload.purity_coefficient;
        assert!(fit.samples > 100, "only {} fit samples", fit.samples);
        assert!((fit.mean - 4.0).abs() < 1e-9, "mean = {}", fit.mean);
        assert!(fit.max - fit.min < 1e-6, "spread = {:e}", fit.max - fit.min);
    }

    #[test]
    fn campaign_is_deterministic_and_seed_sensitive() {
        let a = to_json(&fuzz_campaign(3, 120, 5).unwrap()).unwrap();
        let b = to_json(&fuzz_campaign(3, 120, 5).unwrap()).unwrap();
        let c = to_json(&fuzz_campaign(4, 120, 5).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn bad_arguments_are_config_errors() {
        assert!(matches!(
            fuzz_campaign(0, 10, 1),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            fuzz_campaign(0, 0, 4),
            Err(CliError::Config(_))
        ));
    }
}
