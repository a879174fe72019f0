//! Flat-population expansion, uniform compression, and quasi-static limits.
//!
//! When every Boltzmann factor is small (`beta * spread << 1`) the thermal
//! populations flatten to `p_b = (1 - beta_b E_b)/N` with centered spectra
//! `E_b`, and the cycle becomes quadratic in the spectra:
//!
//! ```text
//! W   = (f/N) [(beta_c + beta_h) E_c.E_h - beta_c |E_c|^2 - beta_h |E_h|^2]
//! R_1 = (f/N) |beta_c E_c - beta_h E_h|^2
//! ```
//!
//! with `f = x_tilde/(2 - x_tilde)`. In this regime the engine window is a
//! geometric statement: work is extracted iff the spectral overlap beats
//! the temperature-weighted norms, which forces
//! `1 < |E_h|/|E_c| < T_h/T_c`.
//!
//! Uniformly compressed spectra `E_h = C E_c` behave the same at *any*
//! temperature (the mode depends only on `C` and `beta_c/beta_h`), because
//! the hot bath is then a Gibbs state of the cold ladder at effective
//! inverse temperature `beta_h C`:
//! heater below `C = 1`, engine for `1 < C < beta_c/beta_h`, refrigerator
//! beyond, degenerate exactly at the edges.
//!
//! For parallel spectra the efficiency collapses to `1 - 1/C`, giving
//! closed-form optima: holding the hot norm fixed,
//! `C* = 2 T_h/(T_h + T_c)` and `eta* = eta_carnot/2`; holding the cold
//! norm fixed, `C* = (T_h + T_c)/(2 T_c)` and
//! `eta* = eta_carnot/(2 - eta_carnot)`. The square-root benchmark
//! `1 - sqrt(T_c/T_h)` always lands between the two.

use crate::cycle::steady_populations;
use crate::error::{Error, Result};
use crate::statekit::{
    centered_energy, dot, gibbs_population, l2_norm, shannon_entropy, BathSpec, CycleParams,
    Population,
};
use crate::thermo::{clausius_number, cycle_observables, Mode};

/// Largest `beta * spectral spread` for which the flat expansion is
/// considered trustworthy.
pub const ULTRA_HOT_VALIDITY_THRESHOLD: f64 = 0.1;

/// Expansion parameter: the larger of the two baths'
/// `beta * (max E - min E)`.
pub fn ultra_hot_smallness(cold: &BathSpec, hot: &BathSpec) -> f64 {
    let spread = |b: &BathSpec| {
        let lo = b.energies().iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = b.energies().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        b.beta() * (hi - lo)
    };
    spread(cold).max(spread(hot))
}

/// Work per cycle in the flat-population expansion.
pub fn ultra_hot_work(cold: &BathSpec, hot: &BathSpec, params: &CycleParams) -> Result<f64> {
    if cold.len() != hot.len() {
        return Err(Error::LengthMismatch {
            expected: cold.len(),
            got: hot.len(),
        });
    }
    let n = cold.len() as f64;
    let f = params.steady_prefactor();
    let e_c = centered_energy(cold);
    let e_h = centered_energy(hot);
    let overlap = dot(&e_c, &e_h);
    Ok(f / n
        * ((cold.beta() + hot.beta()) * overlap
            - cold.beta() * dot(&e_c, &e_c)
            - hot.beta() * dot(&e_h, &e_h)))
}

/// Entropy production per cycle in the flat-population expansion.
pub fn ultra_hot_clausius(cold: &BathSpec, hot: &BathSpec, params: &CycleParams) -> Result<f64> {
    if cold.len() != hot.len() {
        return Err(Error::LengthMismatch {
            expected: cold.len(),
            got: hot.len(),
        });
    }
    let n = cold.len() as f64;
    let f = params.steady_prefactor();
    let e_c = centered_energy(cold);
    let e_h = centered_energy(hot);
    let diff: Vec<f64> = e_c
        .iter()
        .zip(&e_h)
        .map(|(c, h)| cold.beta() * c - hot.beta() * h)
        .collect();
    Ok(f / n * dot(&diff, &diff))
}

/// Flat-expansion and exact entropy production side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraHotClausius {
    /// `(f/N) |beta_c E_c - beta_h E_h|^2` with centered spectra.
    pub approx: f64,
    /// The exact first Clausius number.
    pub exact: f64,
}

/// Evaluates [`ultra_hot_clausius`] next to the exact value.
pub fn ultra_hot_clausius_terms(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
) -> Result<UltraHotClausius> {
    Ok(UltraHotClausius {
        approx: ultra_hot_clausius(cold, hot, params)?,
        exact: clausius_number(cold, hot, params, 1)?,
    })
}

/// The geometric engine condition of the flat expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineCondition {
    /// Whether `overlap > threshold`, i.e. the expansion predicts `W > 0`.
    pub holds: bool,
    /// Spectral overlap `E_c . E_h` (centered).
    pub overlap: f64,
    /// `(beta_c |E_c|^2 + beta_h |E_h|^2) / (beta_c + beta_h)`.
    pub threshold: f64,
    /// `|E_h| / |E_c|`.
    pub norm_ratio: f64,
    /// The window `(1, beta_c/beta_h)` that `norm_ratio` must fall in
    /// whenever the condition holds (`beta_h = 0` opens the top end).
    pub ratio_window: (f64, f64),
}

impl EngineCondition {
    /// True when `norm_ratio` lies strictly inside the window.
    pub fn in_window(&self) -> bool {
        self.norm_ratio > self.ratio_window.0 && self.norm_ratio < self.ratio_window.1
    }
}

/// Checks the flat-expansion engine condition for a bath pair.
///
/// Needs non-flat spectra on both sides and `beta_c + beta_h > 0`.
pub fn ultra_hot_engine_condition(cold: &BathSpec, hot: &BathSpec) -> Result<EngineCondition> {
    if cold.len() != hot.len() {
        return Err(Error::LengthMismatch {
            expected: cold.len(),
            got: hot.len(),
        });
    }
    if cold.beta() + hot.beta() == 0.0 {
        return Err(Error::BadParameter(
            "both baths at beta = 0 leave no engine condition to check".into(),
        ));
    }
    let e_c = centered_energy(cold);
    let e_h = centered_energy(hot);
    let norm_c = l2_norm(&e_c);
    let norm_h = l2_norm(&e_h);
    if norm_c == 0.0 || norm_h == 0.0 {
        return Err(Error::DegenerateSpectrum(
            "flat spectra cannot move heat".into(),
        ));
    }
    let overlap = dot(&e_c, &e_h);
    let threshold = (cold.beta() * norm_c * norm_c + hot.beta() * norm_h * norm_h)
        / (cold.beta() + hot.beta());
    let top = if hot.beta() == 0.0 {
        f64::INFINITY
    } else {
        cold.beta() / hot.beta()
    };
    Ok(EngineCondition {
        holds: overlap > threshold,
        overlap,
        threshold,
        norm_ratio: norm_h / norm_c,
        ratio_window: (1.0, top),
    })
}

/// Operating mode of a uniformly compressed pair `E_h = C E_c`, valid at
/// any temperature scale: heater for `C < 1`, engine inside
/// `1 < C < beta_c/beta_h`, refrigerator beyond, degenerate at the edges.
pub fn uniform_compression_classify(compression: f64, beta_c: f64, beta_h: f64) -> Result<Mode> {
    if !compression.is_finite() || compression <= 0.0 {
        return Err(Error::BadParameter(format!(
            "compression must be finite and positive, got {compression}"
        )));
    }
    if beta_c.is_nan() || beta_h.is_nan() || beta_c <= 0.0 || beta_h < 0.0 || beta_h > beta_c {
        return Err(Error::InvalidBath(format!(
            "need beta_c >= beta_h >= 0 with beta_c > 0, got beta_c = {beta_c}, beta_h = {beta_h}"
        )));
    }
    let tol = 1e-12;
    if (compression - 1.0).abs() <= tol {
        return Ok(Mode::Degenerate);
    }
    if compression < 1.0 {
        return Ok(Mode::Heater);
    }
    if beta_h == 0.0 {
        return Ok(Mode::Engine);
    }
    let carnot_ratio = beta_c / beta_h;
    if (compression - carnot_ratio).abs() <= tol * carnot_ratio.max(1.0) {
        Ok(Mode::Degenerate)
    } else if compression < carnot_ratio {
        Ok(Mode::Engine)
    } else {
        Ok(Mode::Refrigerator)
    }
}

/// Which bath's centered spectral norm is held fixed while the other
/// spectrum is designed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConstraint {
    /// `|E_h|` fixed: the given bath is the hot one, the cold spectrum is
    /// designed.
    FixedHot,
    /// `|E_c|` fixed: the given bath is the cold one, the hot spectrum is
    /// designed.
    FixedCold,
}

/// Outcome of the parallel-spectrum work optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct UltraHotOptimum {
    /// Optimal compression `C* = |E_h|/|E_c|`.
    pub compression: f64,
    /// Closed-form maximal work.
    pub work_analytic: f64,
    /// Golden-section confirmation of the maximum.
    pub work_numeric: f64,
    /// Engine efficiency at the optimum, `1 - 1/C*`.
    pub efficiency: f64,
    /// Carnot efficiency for the two temperatures.
    pub carnot: f64,
    /// Centered spectrum of the designed bath.
    pub optimal_energies: Vec<f64>,
}

fn golden_max(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Maximizes the flat-expansion work over spectra parallel to `base`'s,
/// holding `base`'s centered norm fixed.
///
/// `other_beta` is the inverse temperature of the bath being designed
/// (the cold one under [`NormConstraint::FixedHot`], the hot one under
/// [`NormConstraint::FixedCold`]). Both inverse temperatures must be
/// positive and strictly ordered; parallel spectra are optimal at fixed
/// norms by Cauchy-Schwarz, so the scan over the compression `C` in
/// `(1, beta_c/beta_h)` is exhaustive.
pub fn ultra_hot_optimize(
    base: &BathSpec,
    other_beta: f64,
    constraint: NormConstraint,
    params: &CycleParams,
) -> Result<UltraHotOptimum> {
    if !other_beta.is_finite() || other_beta <= 0.0 || base.beta() <= 0.0 {
        return Err(Error::BadParameter(
            "optimization needs positive inverse temperatures on both sides".into(),
        ));
    }
    let (beta_c, beta_h) = match constraint {
        NormConstraint::FixedHot => (other_beta, base.beta()),
        NormConstraint::FixedCold => (base.beta(), other_beta),
    };
    if beta_c <= beta_h {
        return Err(Error::BadParameter(format!(
            "need beta_c > beta_h, got beta_c = {beta_c}, beta_h = {beta_h}"
        )));
    }
    let e_base = centered_energy(base);
    let norm_sq = dot(&e_base, &e_base);
    if norm_sq == 0.0 {
        return Err(Error::DegenerateSpectrum(
            "a flat base spectrum leaves nothing to optimize".into(),
        ));
    }
    let n = base.len() as f64;
    let f = params.steady_prefactor();

    // Work along the parallel family as a function of the compression.
    let work_of = |c: f64| -> f64 {
        match constraint {
            // |E_c| fixed: E_h = C E_base.
            NormConstraint::FixedCold => {
                f / n * norm_sq * ((beta_c + beta_h) * c - beta_c - beta_h * c * c)
            }
            // |E_h| fixed: E_c = E_base / C.
            NormConstraint::FixedHot => {
                f / n * norm_sq * ((beta_c + beta_h) / c - beta_c / (c * c) - beta_h)
            }
        }
    };

    let (c_star, work_analytic) = match constraint {
        NormConstraint::FixedCold => {
            let c = (beta_c + beta_h) / (2.0 * beta_h);
            let w = f / n * norm_sq * (beta_c - beta_h).powi(2) / (4.0 * beta_h);
            (c, w)
        }
        NormConstraint::FixedHot => {
            let c = 2.0 * beta_c / (beta_c + beta_h);
            let w = f / n * norm_sq * (beta_c - beta_h).powi(2) / (4.0 * beta_c);
            (c, w)
        }
    };
    let c_numeric = golden_max(1.0, beta_c / beta_h, work_of, 1e-9);
    let work_numeric = work_of(c_numeric);

    let optimal_energies: Vec<f64> = match constraint {
        NormConstraint::FixedCold => e_base.iter().map(|e| e * c_star).collect(),
        NormConstraint::FixedHot => e_base.iter().map(|e| e / c_star).collect(),
    };
    Ok(UltraHotOptimum {
        compression: c_star,
        work_analytic,
        work_numeric,
        efficiency: 1.0 - 1.0 / c_star,
        carnot: 1.0 - beta_h / beta_c,
        optimal_energies,
    })
}

/// Benchmark efficiencies at maximal work for a temperature pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcaComparison {
    /// `eta_carnot / 2`: optimum under a fixed hot norm.
    pub fixed_hot_norm: f64,
    /// `1 - sqrt(T_c/T_h)`: the square-root benchmark.
    pub square_root: f64,
    /// `eta_carnot / (2 - eta_carnot)`: optimum under a fixed cold norm.
    pub fixed_cold_norm: f64,
    /// `1 - T_c/T_h`.
    pub carnot: f64,
}

/// Computes the three maximal-work benchmarks; they always satisfy
/// `fixed_hot_norm <= square_root <= fixed_cold_norm <= carnot`.
pub fn nca_comparison(beta_c: f64, beta_h: f64) -> Result<NcaComparison> {
    if !(beta_c > 0.0 && beta_h > 0.0 && beta_c > beta_h) {
        return Err(Error::BadParameter(format!(
            "need beta_c > beta_h > 0, got beta_c = {beta_c}, beta_h = {beta_h}"
        )));
    }
    let ratio = beta_h / beta_c; // T_c / T_h
    let carnot = 1.0 - ratio;
    Ok(NcaComparison {
        fixed_hot_norm: 0.5 * carnot,
        square_root: 1.0 - ratio.sqrt(),
        fixed_cold_norm: carnot / (2.0 - carnot),
        carnot,
    })
}

/// One-collision reversibility check for a bath particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiStaticCheck {
    /// Swap weight used.
    pub x: f64,
    /// Exact entropy change of the scattered bath particle.
    pub ds_exact: f64,
    /// `beta * (heat into the bath particle)`, the reversible entropy.
    pub dq_over_t: f64,
    /// `ds_exact - dq_over_t`; shrinks quadratically with `x`.
    pub abs_err: f64,
    /// `|abs_err| / |ds_exact|`; shrinks linearly with `x`.
    pub rel_err: f64,
}

/// Collides one bath particle with an engine population at swap weight `x`
/// and compares its entropy change against `beta * dq`.
pub fn quasi_static_check(
    bath: &BathSpec,
    engine_pop: &Population,
    x: f64,
) -> Result<QuasiStaticCheck> {
    if bath.len() != engine_pop.len() {
        return Err(Error::LengthMismatch {
            expected: bath.len(),
            got: engine_pop.len(),
        });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::XOutOfRange(x));
    }
    let p_b = gibbs_population(bath);
    let after: Vec<f64> = p_b
        .as_slice()
        .iter()
        .zip(engine_pop.as_slice())
        .map(|(b, e)| (1.0 - x) * b + x * e)
        .collect();
    let after = Population::renormalized(after)?;
    let ds_exact = shannon_entropy(&after) - shannon_entropy(&p_b);
    let dq: f64 = after
        .as_slice()
        .iter()
        .zip(p_b.as_slice())
        .zip(bath.energies())
        .map(|((a, b), e)| (a - b) * e)
        .sum();
    let dq_over_t = bath.beta() * dq;
    let abs_err = ds_exact - dq_over_t;
    let rel_err = if ds_exact != 0.0 {
        (abs_err / ds_exact).abs()
    } else {
        0.0
    };
    Ok(QuasiStaticCheck {
        x,
        ds_exact,
        dq_over_t,
        abs_err,
        rel_err,
    })
}

/// Steady-cycle reversibility check: in the quasi-static limit the
/// temperature-weighted bath entropy changes pay for the work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiStaticWorkCheck {
    /// Exact work per cycle.
    pub work: f64,
    /// `-(T_h dS_h + T_c dS_c)` over the scattered bath particles.
    pub entropy_weighted: f64,
    /// Relative gap between the two; shrinks linearly with `x`.
    pub rel_err: f64,
}

/// Evaluates the work/entropy relation for a full-steady cycle at swap
/// weight `x` (one collision per stroke, complete unitary overlap).
pub fn quasi_static_work_relation(
    cold: &BathSpec,
    hot: &BathSpec,
    x: f64,
) -> Result<QuasiStaticWorkCheck> {
    let t_c = cold.temperature()?;
    let t_h = hot.temperature()?;
    let params = CycleParams::new(x, 1.0)?;
    let report = cycle_observables(cold, hot, &params)?;
    let p_c = gibbs_population(cold);
    let p_h = gibbs_population(hot);
    let steady = steady_populations(&p_c, &p_h, &params)?;
    let mix = |bath_pop: &Population, engine_pop: &[f64]| -> Result<Population> {
        Population::renormalized(
            bath_pop
                .as_slice()
                .iter()
                .zip(engine_pop)
                .map(|(b, e)| (1.0 - x) * b + x * e)
                .collect(),
        )
    };
    let hot_after = mix(&p_h, steady.p_a.as_slice())?;
    let p_c_end = steady.p_c.as_slice();
    let cold_after = mix(&p_c, p_c_end)?;
    let ds_h = shannon_entropy(&hot_after) - shannon_entropy(&p_h);
    let ds_c = shannon_entropy(&cold_after) - shannon_entropy(&p_c);
    let entropy_weighted = -(t_h * ds_h + t_c * ds_c);
    let rel_err = if report.work != 0.0 {
        ((entropy_weighted - report.work) / report.work).abs()
    } else {
        (entropy_weighted - report.work).abs()
    };
    Ok(QuasiStaticWorkCheck {
        work: report.work,
        entropy_weighted,
        rel_err,
    })
}

/// Flat-expansion summary for a bath pair.
#[derive(Debug, Clone, PartialEq)]
pub struct UltraHotReport {
    /// Flat-expansion work.
    pub work_approx: f64,
    /// Exact steady-cycle work.
    pub work_exact: f64,
    /// `work_approx - work_exact`.
    pub abs_err: f64,
    /// Relative error against the exact work (0 when both vanish).
    pub rel_err: f64,
    /// Expansion parameter `max(beta * spread)`.
    pub smallness: f64,
    /// Whether `smallness` is below [`ULTRA_HOT_VALIDITY_THRESHOLD`].
    pub valid: bool,
    /// Geometric engine condition.
    pub engine_condition: EngineCondition,
    /// Entropy production, approximate and exact.
    pub clausius: UltraHotClausius,
}

/// Evaluates the flat expansion next to the exact cycle.
pub fn ultra_hot_report(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
) -> Result<UltraHotReport> {
    let work_approx = ultra_hot_work(cold, hot, params)?;
    let report = cycle_observables(cold, hot, params)?;
    let work_exact = report.work;
    let abs_err = work_approx - work_exact;
    let rel_err = if work_exact != 0.0 {
        (abs_err / work_exact).abs()
    } else if work_approx == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let smallness = ultra_hot_smallness(cold, hot);
    Ok(UltraHotReport {
        work_approx,
        work_exact,
        abs_err,
        rel_err,
        smallness,
        valid: smallness <= ULTRA_HOT_VALIDITY_THRESHOLD,
        engine_condition: ultra_hot_engine_condition(cold, hot)?,
        clausius: UltraHotClausius {
            approx: ultra_hot_clausius(cold, hot, params)?,
            // The report's inverse-temperature form stays finite at
            // beta = 0, unlike the E/T ladder.
            exact: report.clausius,
        },
    })
}
