//! Certified inequalities on work, efficiency, and operating regimes.
//!
//! Every entry ties the exact steady-cycle observables to quantities that
//! are cheaper to measure: bath entropies, purities, the coincidence
//! probability `P_ch = p_c . p_h`, and spectral norms. Entries are tagged
//! by [`Locality`]: a *local* bound needs only single-bath data (plus
//! temperatures and the swap prefactor), while a *nonlocal* one needs
//! genuinely joint quantities such as `P_ch` or cross divergences.
//!
//! Work entries, in the order emitted by [`work_bounds`] (with
//! `f = x_tilde / (2 - x_tilde)`, `S_b` the bath entropies, `P_b` the bath
//! purities, and script-E centered spectra):
//!
//! | name                         | statement |
//! |------------------------------|-----------|
//! | `work_exact_kl`              | `W = f[(T_h-T_c)(S_h-S_c) - T_c KL(p_h\|p_c) - T_h KL(p_c\|p_h)]` (identity) |
//! | `work_free_energy_coincidence` | `W <= f[T_h S_h + T_c S_c + (T_h+T_c) ln P_ch]` |
//! | `work_free_energy_local`     | `W <= f[T_h S_h + T_c S_c + (T_h+T_c)/2 ln(P_c P_h)]` |
//! | `work_entropy_purity`        | `W <= f[(T_h-T_c)(S_h-S_c) - (T_h+T_c)/2 (sqrt P_c - sqrt P_h)^2]` |
//! | `work_cauchy_schwarz`        | `\|W\| <= f sqrt(P_c + P_h - 2 P_ch) \|E_h - E_c\|` (centered spectra) |
//! | `work_chebyshev`             | `\|W\| <= f sqrt(P_c + P_h - 2/N) \|E_h - E_c\|` (centered; needs similarly ordered populations) |
//! | `work_compression`           | `\|W\| <= f sqrt(P_c + P_h - 2/N) sqrt(\|E_h\|^2 - \|E_c\|^2)` (raw spectra; needs similar ordering and componentwise spectral domination) |
//!
//! Efficiency entries from [`efficiency_bounds`] (engine mode only):
//!
//! | name                  | statement |
//! |-----------------------|-----------|
//! | `eta_exact_clausius`  | `eta = 1 - T_c/T_h - T_c R_1 / Q_h` (identity) |
//! | `eta_l2_coincidence`  | `eta <= 1 - T_c/T_h - (T_c/\|E_h\|) sqrt(P_c + P_h - 2 P_ch)` |
//! | `eta_purity_local`    | `eta <= 1 - T_c/T_h - (T_c/\|E_h\|) \|sqrt P_c - sqrt P_h\|` |
//! | `eta_wootters`        | `eta <= 1 - T_c/T_h - T_c (16/pi^2) L_w^2 / (\|E_h\| sqrt(P_c + P_h - 2 P_ch))` |
//! | `eta_carnot`          | `eta <= 1 - T_c/T_h` |
//!
//! The two necessary conditions gate the operating modes themselves:
//! engine operation requires
//! `P_ch >= exp(-(T_c S_c + T_h S_h)/(T_c + T_h))` and refrigeration
//! requires `P_ch >= exp(-S_c)`.

use crate::error::{Error, Result};
use crate::statekit::{
    centered_energy, dot, gibbs_population, kl_divergence, l2_norm, mutual_coincidence, purity,
    shannon_entropy, wootters_distance, BathSpec, CycleParams, Population,
};
use crate::thermo::{cycle_observables, Mode};

/// Slack applied when declaring an inequality satisfied.
pub const BOUND_TOL: f64 = 1e-9;

/// Tolerance for the two exact identities (`work_exact_kl`,
/// `eta_exact_clausius`).
pub const EXACT_TOL: f64 = 1e-10;

/// Whether a bound needs joint two-bath data or factorizes per bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    /// Evaluable from each bath separately (plus temperatures and `f`).
    Local,
    /// Needs joint quantities such as `P_ch` or cross divergences.
    Nonlocal,
}

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Stable identifier, also used by serializers.
    pub name: &'static str,
    /// The bound's value (right-hand side).
    pub value: f64,
    /// The exact quantity being bounded (left-hand side).
    pub actual: f64,
    /// Whether the stated relation holds within tolerance
    /// ([`EXACT_TOL`] for identities, [`BOUND_TOL`] otherwise).
    pub satisfied: bool,
    /// Data requirements of the right-hand side.
    pub locality: Locality,
}

/// Outcome of a bound whose preconditions may fail.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundOutcome {
    /// Preconditions held; the inequality was evaluated.
    Evaluated(BoundReport),
    /// A precondition failed, so the inequality does not apply.
    Skipped {
        /// Which bound was skipped.
        name: &'static str,
        /// Human-readable precondition failure.
        reason: String,
    },
}

impl BoundOutcome {
    /// The evaluated report, if any.
    pub fn report(&self) -> Option<&BoundReport> {
        match self {
            BoundOutcome::Evaluated(r) => Some(r),
            BoundOutcome::Skipped { .. } => None,
        }
    }

    /// The entry's stable name regardless of outcome.
    pub fn name(&self) -> &'static str {
        match self {
            BoundOutcome::Evaluated(r) => r.name,
            BoundOutcome::Skipped { name, .. } => name,
        }
    }
}

/// `|a - b|^2`, the stable form of `P_a + P_b - 2 P_ab`.
fn population_distance_sq(a: &Population, b: &Population) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// True when the two populations are similarly ordered:
/// `(a_i - a_j)(b_i - b_j) >= 0` for every pair of levels.
pub fn similarly_ordered(a: &Population, b: &Population) -> bool {
    let (a, b) = (a.as_slice(), b.as_slice());
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if (a[i] - a[j]) * (b[i] - b[j]) < 0.0 {
                return false;
            }
        }
    }
    true
}

fn check_pair(cold: &BathSpec, hot: &BathSpec) -> Result<()> {
    if cold.len() != hot.len() {
        return Err(Error::LengthMismatch {
            expected: cold.len(),
            got: hot.len(),
        });
    }
    Ok(())
}

/// Necessary condition for engine operation:
/// `P_ch >= exp(-(T_c S_c + T_h S_h)/(T_c + T_h))`.
///
/// `satisfied = false` certifies that no swap parameters can make this
/// pair of baths an engine. Finite temperatures are required.
pub fn engine_necessary_condition(cold: &BathSpec, hot: &BathSpec) -> Result<BoundReport> {
    check_pair(cold, hot)?;
    let t_c = cold.temperature()?;
    let t_h = hot.temperature()?;
    let p_c = gibbs_population(cold);
    let p_h = gibbs_population(hot);
    let s_c = shannon_entropy(&p_c);
    let s_h = shannon_entropy(&p_h);
    let actual = mutual_coincidence(&p_c, &p_h)?;
    let value = (-(t_c * s_c + t_h * s_h) / (t_c + t_h)).exp();
    Ok(BoundReport {
        name: "engine_purity_coincidence",
        value,
        actual,
        satisfied: actual >= value - BOUND_TOL,
        locality: Locality::Nonlocal,
    })
}

/// Necessary condition for refrigeration: `P_ch >= exp(-S_c)`.
///
/// Valid at any inverse temperature, including `beta = 0`.
pub fn refrigerator_necessary_condition(cold: &BathSpec, hot: &BathSpec) -> Result<BoundReport> {
    check_pair(cold, hot)?;
    let p_c = gibbs_population(cold);
    let p_h = gibbs_population(hot);
    let actual = mutual_coincidence(&p_c, &p_h)?;
    let value = (-shannon_entropy(&p_c)).exp();
    Ok(BoundReport {
        name: "refrigerator_purity_entropy",
        value,
        actual,
        satisfied: actual >= value - BOUND_TOL,
        locality: Locality::Nonlocal,
    })
}

/// Evaluates the seven work entries in a fixed order.
///
/// Entries whose preconditions fail — including the temperature-dependent
/// ones when a bath sits at `beta = 0` — come back as
/// [`BoundOutcome::Skipped`] with the reason, never as spurious failures.
pub fn work_bounds(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
) -> Result<Vec<BoundOutcome>> {
    check_pair(cold, hot)?;
    let report = cycle_observables(cold, hot, params)?;
    let w = report.work;
    let f = params.steady_prefactor();
    let n = cold.len() as f64;

    let p_c = gibbs_population(cold);
    let p_h = gibbs_population(hot);
    let s_c = shannon_entropy(&p_c);
    let s_h = shannon_entropy(&p_h);
    let pur_c = purity(&p_c);
    let pur_h = purity(&p_h);
    let p_ch = mutual_coincidence(&p_c, &p_h)?;
    let e_c_centered = centered_energy(cold);
    let e_h_centered = centered_energy(hot);
    let centered_gap: Vec<f64> = e_h_centered
        .iter()
        .zip(&e_c_centered)
        .map(|(h, c)| h - c)
        .collect();
    // |p_h - p_c|^2 equals P_c + P_h - 2 P_ch; the difference form avoids
    // catastrophic cancellation for nearby populations.
    let l2_sq = population_distance_sq(&p_c, &p_h);

    let temp = match (cold.temperature(), hot.temperature()) {
        (Ok(tc), Ok(th)) => Some((tc, th)),
        _ => None,
    };
    let skip_temp = |name: &'static str| BoundOutcome::Skipped {
        name,
        reason: "temperature undefined at beta = 0".into(),
    };

    let mut out = Vec::with_capacity(7);

    // Identity: the work is a free-energy balance of the two strokes.
    out.push(match temp {
        Some((t_c, t_h)) => {
            let kl_hc = kl_divergence(&p_h, &p_c)?;
            let kl_ch = kl_divergence(&p_c, &p_h)?;
            let value = f * ((t_h - t_c) * (s_h - s_c) - t_c * kl_hc - t_h * kl_ch);
            BoundOutcome::Evaluated(BoundReport {
                name: "work_exact_kl",
                value,
                actual: w,
                satisfied: (value - w).abs() <= EXACT_TOL,
                locality: Locality::Nonlocal,
            })
        }
        None => skip_temp("work_exact_kl"),
    });

    // Jensen applied to both divergences.
    out.push(match temp {
        Some((t_c, t_h)) => {
            let value = f * (t_h * s_h + t_c * s_c + (t_h + t_c) * p_ch.ln());
            BoundOutcome::Evaluated(BoundReport {
                name: "work_free_energy_coincidence",
                value,
                actual: w,
                satisfied: w <= value + BOUND_TOL,
                locality: Locality::Nonlocal,
            })
        }
        None => skip_temp("work_free_energy_coincidence"),
    });

    // Cauchy-Schwarz turns the coincidence into per-bath purities.
    out.push(match temp {
        Some((t_c, t_h)) => {
            let value = f * (t_h * s_h + t_c * s_c + 0.5 * (t_h + t_c) * (pur_c * pur_h).ln());
            BoundOutcome::Evaluated(BoundReport {
                name: "work_free_energy_local",
                value,
                actual: w,
                satisfied: w <= value + BOUND_TOL,
                locality: Locality::Local,
            })
        }
        None => skip_temp("work_free_energy_local"),
    });

    // Pinsker applied to both divergences.
    out.push(match temp {
        Some((t_c, t_h)) => {
            let gap = pur_c.sqrt() - pur_h.sqrt();
            let value = f * ((t_h - t_c) * (s_h - s_c) - 0.5 * (t_h + t_c) * gap * gap);
            BoundOutcome::Evaluated(BoundReport {
                name: "work_entropy_purity",
                value,
                actual: w,
                satisfied: w <= value + BOUND_TOL,
                locality: Locality::Local,
            })
        }
        None => skip_temp("work_entropy_purity"),
    });

    // |W| = f |(p_h - p_c) . (E_h - E_c)| via Cauchy-Schwarz; centering is
    // free because dp sums to zero.
    let value_cs = f * l2_sq.sqrt() * l2_norm(&centered_gap);
    out.push(BoundOutcome::Evaluated(BoundReport {
        name: "work_cauchy_schwarz",
        value: value_cs,
        actual: w.abs(),
        satisfied: w.abs() <= value_cs + BOUND_TOL,
        locality: Locality::Nonlocal,
    }));

    // Chebyshev's sum inequality gives P_ch >= 1/N for similarly ordered
    // populations, removing the joint factor from the population norm.
    let ordered = similarly_ordered(&p_c, &p_h);
    out.push(if ordered {
        let pop_sq = (pur_c + pur_h - 2.0 / n).max(0.0);
        let value = f * pop_sq.sqrt() * l2_norm(&centered_gap);
        BoundOutcome::Evaluated(BoundReport {
            name: "work_chebyshev",
            value,
            actual: w.abs(),
            satisfied: w.abs() <= value + BOUND_TOL,
            locality: Locality::Nonlocal,
        })
    } else {
        BoundOutcome::Skipped {
            name: "work_chebyshev",
            reason: "populations are not similarly ordered".into(),
        }
    });

    // Fully local form: additionally needs the raw hot spectrum to dominate
    // the cold one componentwise (same sign, no smaller magnitude).
    let dominated = cold
        .energies()
        .iter()
        .zip(hot.energies())
        .all(|(c, h)| h * c >= 0.0 && h * h >= c * c);
    out.push(if !ordered {
        BoundOutcome::Skipped {
            name: "work_compression",
            reason: "populations are not similarly ordered".into(),
        }
    } else if !dominated {
        BoundOutcome::Skipped {
            name: "work_compression",
            reason: "hot spectrum does not componentwise dominate the cold one".into(),
        }
    } else {
        let pop_sq = (pur_c + pur_h - 2.0 / n).max(0.0);
        let e_h_sq = dot(hot.energies(), hot.energies());
        let e_c_sq = dot(cold.energies(), cold.energies());
        let value = f * pop_sq.sqrt() * (e_h_sq - e_c_sq).max(0.0).sqrt();
        BoundOutcome::Evaluated(BoundReport {
            name: "work_compression",
            value,
            actual: w.abs(),
            satisfied: w.abs() <= value + BOUND_TOL,
            locality: Locality::Local,
        })
    });

    Ok(out)
}

/// Evaluates the five efficiency entries; engine mode is required.
///
/// Outside engine operation the efficiency is undefined, so the whole call
/// fails with [`Error::NotAnEngine`]. Finite temperatures are required.
pub fn efficiency_bounds(
    cold: &BathSpec,
    hot: &BathSpec,
    params: &CycleParams,
) -> Result<Vec<BoundReport>> {
    check_pair(cold, hot)?;
    let t_c = cold.temperature()?;
    let t_h = hot.temperature()?;
    let report = cycle_observables(cold, hot, params)?;
    if report.mode != Mode::Engine {
        return Err(Error::NotAnEngine(format!(
            "mode is {}, efficiency bounds need work extraction",
            report.mode
        )));
    }
    let eta = report.efficiency.expect("engine mode carries an efficiency");
    let carnot = 1.0 - t_c / t_h;

    let p_c = gibbs_population(cold);
    let p_h = gibbs_population(hot);
    let pur_c = purity(&p_c);
    let pur_h = purity(&p_h);
    let e_h_centered = centered_energy(hot);
    let e_h_norm = l2_norm(&e_h_centered);
    if e_h_norm == 0.0 {
        return Err(Error::DegenerateSpectrum(
            "hot spectrum is flat, so no heat can enter".into(),
        ));
    }
    let l2 = population_distance_sq(&p_c, &p_h).sqrt();

    let mut out = Vec::with_capacity(5);

    // Identity: efficiency equals Carnot minus the entropy-production tax
    // per unit of hot heat.
    let exact = carnot - t_c * report.clausius / report.q_hot;
    out.push(BoundReport {
        name: "eta_exact_clausius",
        value: exact,
        actual: eta,
        satisfied: (exact - eta).abs() <= EXACT_TOL,
        locality: Locality::Nonlocal,
    });

    // J >= |p_h - p_c|^2 and Q_h <= f |p_h - p_c| |E_h| put a floor under
    // the tax.
    let l2_val = carnot - t_c * l2 / e_h_norm;
    out.push(BoundReport {
        name: "eta_l2_coincidence",
        value: l2_val,
        actual: eta,
        satisfied: eta <= l2_val + BOUND_TOL,
        locality: Locality::Nonlocal,
    });

    // The inverse triangle inequality localizes the population distance.
    let purity_val = carnot - t_c * (pur_c.sqrt() - pur_h.sqrt()).abs() / e_h_norm;
    out.push(BoundReport {
        name: "eta_purity_local",
        value: purity_val,
        actual: eta,
        satisfied: eta <= purity_val + BOUND_TOL,
        locality: Locality::Local,
    });

    // J >= (16/pi^2) L_w^2 in terms of the Wootters angle.
    let l_w = wootters_distance(&p_c, &p_h)?;
    let wootters_val = if l2 > 0.0 {
        carnot
            - t_c * (16.0 / (std::f64::consts::PI * std::f64::consts::PI)) * l_w * l_w
                / (e_h_norm * l2)
    } else {
        carnot
    };
    out.push(BoundReport {
        name: "eta_wootters",
        value: wootters_val,
        actual: eta,
        satisfied: eta <= wootters_val + BOUND_TOL,
        locality: Locality::Nonlocal,
    });

    out.push(BoundReport {
        name: "eta_carnot",
        value: carnot,
        actual: eta,
        satisfied: eta <= carnot + BOUND_TOL,
        locality: Locality::Local,
    });

    Ok(out)
}
