//! Stochastic single-trajectory simulation of the four-stroke cycle.
//!
//! The engine is one N-level particle whose classical level is tracked
//! through cycles. Each cycle runs four strokes:
//!
//! 1. compression: the ladder switches from the cold spectrum to the hot
//!    one with the level frozen (work in),
//! 2. hot contact: `collisions_per_stroke` collisions, each against a
//!    fresh hot thermal particle; a collision exchanges the two levels
//!    with probability `x_tilde = x * r` and otherwise leaves both alone,
//! 3. expansion: the ladder switches back (work out),
//! 4. cold contact: same collision rule against fresh cold particles.
//!
//! This unravels the partial-swap map exactly: the engine's population
//! after a stroke is `(1 - x_tilde) p + x_tilde p_bath` per collision, and
//! the scattered bath particle carries the engine's old level whenever an
//! exchange fires, so bath changes mirror engine changes antisymmetrically.
//!
//! Per cycle the counters satisfy `q_h + q_c - w = U_end - U_start`
//! identically (cold-frame internal energy), so trajectory means obey the
//! first law up to the boundary term `energy_drift`, which is reported
//! instead of silently absorbed.

use crate::error::{Error, Result};
use crate::statekit::{gibbs_population, purity, BathSpec, CycleParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The deterministic generator used for every simulation.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Cycle budget cap for [`adaptive_burn_in`].
pub const BURN_IN_CAP: usize = 100_000;

/// Full description of one stochastic run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Cold bath (spectrum + inverse temperature).
    pub cold: BathSpec,
    /// Hot bath.
    pub hot: BathSpec,
    /// Swap weight and unitary overlap.
    pub params: CycleParams,
    /// Measured cycles (rounded down to a whole number of batches).
    pub n_cycles: usize,
    /// Cycles discarded before measuring.
    pub burn_in: usize,
    /// Seed for the ChaCha8 stream.
    pub seed: u64,
    /// Fresh bath particles scattered per stroke.
    pub collisions_per_stroke: usize,
    /// Whether to keep the per-cycle work series.
    pub record_per_cycle: bool,
}

impl SimConfig {
    /// Checks the run description for internal consistency.
    pub fn validate(&self) -> Result<()> {
        if self.cold.len() != self.hot.len() {
            return Err(Error::LengthMismatch {
                expected: self.cold.len(),
                got: self.hot.len(),
            });
        }
        if self.cold.beta() < self.hot.beta() {
            return Err(Error::InvalidSimConfig(
                "cold bath must not be hotter than the hot bath".into(),
            ));
        }
        if self.n_cycles == 0 {
            return Err(Error::InvalidSimConfig("n_cycles must be positive".into()));
        }
        if self.collisions_per_stroke == 0 {
            return Err(Error::InvalidSimConfig(
                "collisions_per_stroke must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Swap weight of a whole stroke: `1 - (1 - x_tilde)^k` for `k`
    /// collisions.
    pub fn stroke_swap_weight(&self) -> f64 {
        1.0 - (1.0 - self.params.x_tilde()).powi(self.collisions_per_stroke as i32)
    }
}

/// Measured trajectory statistics.
///
/// Standard errors come from batch means (up to 100 equal batches), so
/// they remain honest in the presence of cycle-to-cycle correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Occupancy frequencies at the cycle start (cold ladder corner).
    pub mean_p_a: Vec<f64>,
    /// Occupancy frequencies after the hot stroke (hot ladder corner).
    pub mean_p_c: Vec<f64>,
    /// Mean work extracted per cycle.
    pub mean_work: f64,
    /// Mean heat absorbed from the hot bath per cycle.
    pub mean_q_hot: f64,
    /// Mean heat absorbed from the cold bath per cycle.
    pub mean_q_cold: f64,
    /// Batch-means standard error of `mean_work`.
    pub stderr_work: f64,
    /// Per-level batch-means standard errors of `mean_p_a`.
    pub stderr_p_a: Vec<f64>,
    /// Per-level batch-means standard errors of `mean_p_c`.
    pub stderr_p_c: Vec<f64>,
    /// `(U_end - U_start) / cycles_measured` in the cold frame; exactly
    /// the gap in the first-law identity for trajectory means.
    pub energy_drift: f64,
    /// Cycles that entered the statistics.
    pub cycles_measured: usize,
    /// Per-cycle work series when requested.
    pub per_cycle_work: Option<Vec<f64>>,
}

fn sample_level(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

struct CycleOutcome {
    level_a: usize,
    level_c: usize,
    work: f64,
    q_hot: f64,
    q_cold: f64,
}

/// Immutable per-run lookup tables shared by every cycle.
struct CycleTables<'a> {
    p_cold: &'a [f64],
    p_hot: &'a [f64],
    e_cold: &'a [f64],
    e_hot: &'a [f64],
    x_tilde: f64,
    collisions: usize,
}

impl<'a> CycleTables<'a> {
    fn new(config: &'a SimConfig, p_cold: &'a [f64], p_hot: &'a [f64]) -> Self {
        CycleTables {
            p_cold,
            p_hot,
            e_cold: config.cold.energies(),
            e_hot: config.hot.energies(),
            x_tilde: config.params.x_tilde(),
            collisions: config.collisions_per_stroke,
        }
    }
}

/// Advances one full cycle; `level` enters and leaves in the cold frame.
fn run_cycle(rng: &mut ChaCha8Rng, level: &mut usize, t: &CycleTables) -> CycleOutcome {
    let level_a = *level;
    for _ in 0..t.collisions {
        if rng.random::<f64>() < t.x_tilde {
            *level = sample_level(rng, t.p_hot);
        }
    }
    let level_c = *level;
    for _ in 0..t.collisions {
        if rng.random::<f64>() < t.x_tilde {
            *level = sample_level(rng, t.p_cold);
        }
    }
    let q_hot = t.e_hot[level_c] - t.e_hot[level_a];
    let q_cold = t.e_cold[*level] - t.e_cold[level_c];
    let work =
        (t.e_hot[level_c] - t.e_cold[level_c]) - (t.e_hot[level_a] - t.e_cold[level_a]);
    CycleOutcome {
        level_a,
        level_c,
        work,
        q_hot,
        q_cold,
    }
}

fn batch_stderr(batch_means: &[f64]) -> f64 {
    let nb = batch_means.len();
    if nb < 2 {
        return 0.0;
    }
    let mean = batch_means.iter().sum::<f64>() / nb as f64;
    let var = batch_means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>()
        / ((nb - 1) as f64);
    (var / nb as f64).sqrt()
}

/// Runs the trajectory described by `config`.
///
/// The same config and seed always produce bit-identical output.
pub fn simulate(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p_cold = gibbs_population(&config.cold);
    let p_hot = gibbs_population(&config.hot);
    let (p_c, p_h) = (p_cold.as_slice(), p_hot.as_slice());
    let tables = CycleTables::new(config, p_c, p_h);
    let e_c = tables.e_cold;
    let n_levels = config.cold.len();

    // The engine starts as a fresh cold thermal particle.
    let mut level = sample_level(&mut rng, p_c);
    for _ in 0..config.burn_in {
        run_cycle(&mut rng, &mut level, &tables);
    }

    let n_batches = config.n_cycles.min(100);
    let batch_size = config.n_cycles / n_batches;
    let cycles_measured = n_batches * batch_size;

    let mut work_batches = Vec::with_capacity(n_batches);
    let mut occ_a_batches: Vec<Vec<f64>> = Vec::with_capacity(n_batches);
    let mut occ_c_batches: Vec<Vec<f64>> = Vec::with_capacity(n_batches);
    let mut sum_q_hot = 0.0;
    let mut sum_q_cold = 0.0;
    let mut sum_work = 0.0;
    let mut per_cycle = config
        .record_per_cycle
        .then(|| Vec::with_capacity(cycles_measured));

    let u_start = e_c[level];
    for _ in 0..n_batches {
        let mut batch_work = 0.0;
        let mut occ_a = vec![0.0; n_levels];
        let mut occ_c = vec![0.0; n_levels];
        for _ in 0..batch_size {
            let out = run_cycle(&mut rng, &mut level, &tables);
            batch_work += out.work;
            occ_a[out.level_a] += 1.0;
            occ_c[out.level_c] += 1.0;
            sum_q_hot += out.q_hot;
            sum_q_cold += out.q_cold;
            if let Some(series) = per_cycle.as_mut() {
                series.push(out.work);
            }
        }
        sum_work += batch_work;
        work_batches.push(batch_work / batch_size as f64);
        occ_a_batches.push(occ_a.iter().map(|c| c / batch_size as f64).collect());
        occ_c_batches.push(occ_c.iter().map(|c| c / batch_size as f64).collect());
    }
    let u_end = e_c[level];

    let nf = cycles_measured as f64;
    let level_means = |batches: &[Vec<f64>]| -> Vec<f64> {
        (0..n_levels)
            .map(|i| batches.iter().map(|b| b[i]).sum::<f64>() / n_batches as f64)
            .collect()
    };
    let level_stderr = |batches: &[Vec<f64>]| -> Vec<f64> {
        (0..n_levels)
            .map(|i| {
                let series: Vec<f64> = batches.iter().map(|b| b[i]).collect();
                batch_stderr(&series)
            })
            .collect()
    };

    Ok(Trajectory {
        mean_p_a: level_means(&occ_a_batches),
        mean_p_c: level_means(&occ_c_batches),
        mean_work: sum_work / nf,
        mean_q_hot: sum_q_hot / nf,
        mean_q_cold: sum_q_cold / nf,
        stderr_work: batch_stderr(&work_batches),
        stderr_p_a: level_stderr(&occ_a_batches),
        stderr_p_c: level_stderr(&occ_c_batches),
        energy_drift: (u_end - u_start) / nf,
        cycles_measured,
        per_cycle_work: per_cycle,
    })
}

/// Empirical state of the scattered bath particles.
#[derive(Debug, Clone, PartialEq)]
pub struct BackreactionTrace {
    /// Occupancy frequencies of outgoing hot particles.
    pub hot_out: Vec<f64>,
    /// Occupancy frequencies of outgoing cold particles.
    pub cold_out: Vec<f64>,
    /// Purity of the outgoing hot ensemble minus the thermal purity.
    pub delta_purity_hot: f64,
    /// Same for the cold ensemble.
    pub delta_purity_cold: f64,
    /// Two-bath total purity change per scattered pair.
    pub total: f64,
    /// Measured cycles.
    pub cycles: usize,
}

/// Tracks every scattered bath particle over the measured cycles.
///
/// A particle that never exchanges leaves in a fresh thermal level, so the
/// outgoing marginal per collision is
/// `(1 - x_tilde) p_bath + x_tilde p_engine`, mirroring the engine's own
/// stroke map. With one collision per stroke the ensemble purity changes
/// converge to the closed-form per-cycle backreaction.
pub fn simulate_bath_backreaction(config: &SimConfig) -> Result<BackreactionTrace> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p_cold = gibbs_population(&config.cold);
    let p_hot = gibbs_population(&config.hot);
    let (p_c, p_h) = (p_cold.as_slice(), p_hot.as_slice());
    let x_tilde = config.params.x_tilde();
    let k = config.collisions_per_stroke;
    let n_levels = config.cold.len();

    let mut level = sample_level(&mut rng, p_c);
    // Burn-in without recording; fresh particles are still consumed.
    for _ in 0..config.burn_in {
        for bath in [p_h, p_c] {
            for _ in 0..k {
                if rng.random::<f64>() < x_tilde {
                    level = sample_level(&mut rng, bath);
                }
            }
        }
    }

    let mut hot_counts = vec![0u64; n_levels];
    let mut cold_counts = vec![0u64; n_levels];
    for _ in 0..config.n_cycles {
        for (bath, counts) in [(p_h, &mut hot_counts), (p_c, &mut cold_counts)] {
            for _ in 0..k {
                let fresh = sample_level(&mut rng, bath);
                let out = if rng.random::<f64>() < x_tilde {
                    let old = level;
                    level = fresh;
                    old
                } else {
                    fresh
                };
                counts[out] += 1;
            }
        }
    }

    let total_scattered = (config.n_cycles * k) as f64;
    let hot_out: Vec<f64> = hot_counts.iter().map(|c| *c as f64 / total_scattered).collect();
    let cold_out: Vec<f64> = cold_counts
        .iter()
        .map(|c| *c as f64 / total_scattered)
        .collect();
    let empirical_purity = |freqs: &[f64]| freqs.iter().map(|p| p * p).sum::<f64>();
    let delta_purity_hot = empirical_purity(&hot_out) - purity(&p_hot);
    let delta_purity_cold = empirical_purity(&cold_out) - purity(&p_cold);
    Ok(BackreactionTrace {
        hot_out,
        cold_out,
        delta_purity_hot,
        delta_purity_cold,
        total: delta_purity_hot + delta_purity_cold,
        cycles: config.n_cycles,
    })
}

/// Suggests a burn-in length by watching the cumulative mean of the
/// engine's cold-frame energy at cycle starts, in 100-cycle windows.
///
/// Convergence is declared when consecutive cumulative means differ by
/// less than 1%, with a floor of 1000 cycles; gives up at
/// [`BURN_IN_CAP`] cycles. Deterministic for a given config.
pub fn adaptive_burn_in(config: &SimConfig) -> Result<usize> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p_cold = gibbs_population(&config.cold);
    let p_hot = gibbs_population(&config.hot);
    let (p_c, p_h) = (p_cold.as_slice(), p_hot.as_slice());
    let tables = CycleTables::new(config, p_c, p_h);
    let e_c = tables.e_cold;

    let window = 100;
    let mut level = sample_level(&mut rng, p_c);
    let mut cycles = 0usize;
    let mut energy_sum = 0.0;
    let mut prev_mean: Option<f64> = None;
    while cycles < BURN_IN_CAP {
        for _ in 0..window {
            energy_sum += e_c[level];
            run_cycle(&mut rng, &mut level, &tables);
        }
        cycles += window;
        let mean = energy_sum / cycles as f64;
        if let Some(prev) = prev_mean {
            if (mean - prev).abs() <= 0.01 * (mean.abs() + 1e-12) {
                return Ok(cycles.max(1000));
            }
        }
        prev_mean = Some(mean);
    }
    Err(Error::NoConvergence {
        iterations: BURN_IN_CAP,
        tol: 0.01,
    })
}
