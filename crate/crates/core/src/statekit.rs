//! Core value types and statistical functionals.
//!
//! A bath is a set of level energies `E_i` together with an inverse
//! temperature `beta >= 0`; its thermal occupation is the Gibbs vector
//! `p_i = exp(-beta E_i) / Z`. Everything downstream of the cycle solver is
//! expressed through a handful of scalar functionals of such probability
//! vectors:
//!
//! - Shannon entropy        `S(p)   = -sum_i p_i ln p_i` (with `0 ln 0 := 0`)
//! - purity                 `P(p)   =  sum_i p_i^2 = |p|^2`
//! - mutual coincidence     `P_pq   =  sum_i p_i q_i = p . q`
//! - Kullback-Leibler       `D(p|q) =  sum_i p_i ln(p_i / q_i)`
//! - Jeffreys divergence    `J(p,q) =  D(p|q) + D(q|p)`
//! - Wootters distance      `L_w    =  arccos( sum_i sqrt(p_i q_i) )`
//!
//! Inverse temperature (not temperature) is the internal representation so
//! that the ultra-hot point `beta = 0` is a legal bath; `1/beta` is exposed
//! through a fallible accessor.

use crate::error::{Error, Result};

/// Absolute tolerance on probability normalization after construction.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Maximum drift tolerated before renormalizing a derived probability vector.
pub const DRIFT_TOL: f64 = 1e-9;

/// Which reservoir a bath specification describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathLabel {
    Cold,
    Hot,
}

/// A thermal reservoir: level energies plus an inverse temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    energies: Vec<f64>,
    beta: f64,
    label: BathLabel,
}

impl BathSpec {
    /// Builds a bath specification.
    ///
    /// Requires at least two levels, finite energies, and a finite
    /// `beta >= 0` (`beta = 0` is the ultra-hot bath).
    pub fn new(energies: Vec<f64>, beta: f64, label: BathLabel) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::InvalidBath(format!(
                "need at least 2 levels, got {}",
                energies.len()
            )));
        }
        if let Some(bad) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidBath(format!("non-finite energy {bad}")));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidBath(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(Self {
            energies,
            beta,
            label,
        })
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    /// True when the spectrum is empty (never, for a validated bath).
    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Level energies.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Inverse temperature.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Reservoir label.
    pub fn label(&self) -> BathLabel {
        self.label
    }

    /// Temperature `1/beta`; fails at the ultra-hot point `beta = 0`.
    pub fn temperature(&self) -> Result<f64> {
        if self.beta == 0.0 {
            Err(Error::UltraHotTemperature)
        } else {
            Ok(1.0 / self.beta)
        }
    }

    /// Spectral span `max_i E_i - min_i E_i`.
    pub fn gap(&self) -> f64 {
        let max = self.energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.energies.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Helmholtz free energy `F = -(1/beta) ln sum_i exp(-beta E_i)`,
    /// evaluated in shifted form for numerical stability. Undefined at
    /// `beta = 0`.
    pub fn free_energy(&self) -> Result<f64> {
        let t = self.temperature()?;
        let m = self
            .energies
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let z_shifted: f64 = self
            .energies
            .iter()
            .map(|e| (-self.beta * (e - m)).exp())
            .sum();
        Ok(m - t * z_shifted.ln())
    }

    /// A copy of this bath with a replacement spectrum (same `beta`/label).
    pub fn with_energies(&self, energies: Vec<f64>) -> Result<Self> {
        Self::new(energies, self.beta, self.label)
    }
}

/// A validated probability vector over engine levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    probs: Vec<f64>,
}

impl Population {
    /// Builds a population, requiring every entry in `[0, 1]` and a total
    /// within [`NORMALIZATION_TOL`] of one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidPopulation(format!(
                "need at least 2 levels, got {}",
                probs.len()
            )));
        }
        for (i, p) in probs.iter().enumerate() {
            if !p.is_finite() || *p < 0.0 || *p > 1.0 {
                return Err(Error::InvalidPopulation(format!(
                    "entry {i} = {p} outside [0, 1]"
                )));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidPopulation(format!(
                "entries sum to {total}, not 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        Ok(Self { probs })
    }

    /// Builds a population from arithmetic output that should already be
    /// normalized: drift beyond [`DRIFT_TOL`] is an error, anything smaller
    /// is renormalized away. Entries within `-1e-12` of zero are clamped.
    pub fn renormalized(mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidPopulation(format!(
                "need at least 2 levels, got {}",
                probs.len()
            )));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidPopulation(format!("entry {i} non-finite")));
            }
            if *p < 0.0 {
                if *p < -NORMALIZATION_TOL {
                    return Err(Error::InvalidPopulation(format!(
                        "entry {i} = {p} is negative beyond tolerance"
                    )));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DRIFT_TOL {
            return Err(Error::InvalidPopulation(format!(
                "normalization drifted to {total}, beyond {DRIFT_TOL:e}"
            )));
        }
        for p in probs.iter_mut() {
            *p /= total;
        }
        Ok(Self { probs })
    }

    /// The uniform distribution over `n` levels.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 2, "populations need at least 2 levels");
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// True when empty (never, for a validated population).
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probabilities as a slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// The signed change `other - self`.
    pub fn delta_to(&self, other: &Population) -> Result<DeltaPopulation> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let deltas = other
            .probs
            .iter()
            .zip(&self.probs)
            .map(|(b, a)| b - a)
            .collect();
        DeltaPopulation::new(deltas)
    }
}

/// A signed population change; entries sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPopulation {
    deltas: Vec<f64>,
}

impl DeltaPopulation {
    /// Builds a population change, requiring the entries to sum to zero
    /// within [`NORMALIZATION_TOL`].
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        let total: f64 = deltas.iter().sum();
        if total.abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidPopulation(format!(
                "population change sums to {total}, not 0"
            )));
        }
        Ok(Self { deltas })
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    /// True when empty.
    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Entries as a slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.deltas
    }

    /// Inner product with an arbitrary coefficient vector.
    pub fn dot(&self, weights: &[f64]) -> Result<f64> {
        if weights.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: weights.len(),
            });
        }
        Ok(dot(&self.deltas, weights))
    }

    /// Euclidean norm of the change vector.
    pub fn l2_norm(&self) -> f64 {
        self.deltas.iter().map(|d| d * d).sum::<f64>().sqrt()
    }
}

/// Per-stroke collision parameters: swap weight `x` and collision
/// probability `R`. Only the product `x_tilde = x R` enters steady-state
/// averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams {
    x: f64,
    r: f64,
}

impl CycleParams {
    /// Builds collision parameters with `x` and `R` both in `[0, 1]`.
    pub fn new(x: f64, r: f64) -> Result<Self> {
        if !x.is_finite() || !(0.0..=1.0).contains(&x) {
            return Err(Error::XOutOfRange(x));
        }
        if !r.is_finite() || !(0.0..=1.0).contains(&r) {
            return Err(Error::BadParameter(format!(
                "collision probability R = {r} outside [0, 1]"
            )));
        }
        Ok(Self { x, r })
    }

    /// Swap weight per collision.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Collision probability per stroke.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Effective per-stroke swap weight `x R`.
    pub fn x_tilde(&self) -> f64 {
        self.x * self.r
    }

    /// The steady-state prefactor `x_tilde / (2 - x_tilde)` that multiplies
    /// every per-cycle average.
    pub fn steady_prefactor(&self) -> f64 {
        let xt = self.x_tilde();
        xt / (2.0 - xt)
    }
}

/// Plain dot product of two equal-length slices.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm of a slice.
pub(crate) fn l2_norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Thermal (Gibbs) occupation of a bath, `p_i = exp(-beta E_i) / Z`,
/// evaluated with a max-shift so that large `beta E` cannot overflow.
pub fn gibbs_population(bath: &BathSpec) -> Population {
    let exponents: Vec<f64> = bath.energies().iter().map(|e| -bath.beta() * e).collect();
    let m = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exponents.iter().map(|w| (w - m).exp()).collect();
    let z: f64 = weights.iter().sum();
    Population {
        probs: weights.into_iter().map(|w| w / z).collect(),
    }
}

/// Shannon entropy `-sum_i p_i ln p_i`, with `0 ln 0 := 0`.
pub fn shannon_entropy(p: &Population) -> f64 {
    p.as_slice()
        .iter()
        .map(|&pi| if pi > 0.0 { -pi * pi.ln() } else { 0.0 })
        .sum()
}

/// Purity `sum_i p_i^2`.
pub fn purity(p: &Population) -> f64 {
    dot(p.as_slice(), p.as_slice())
}

/// Mutual coincidence `sum_i p_i q_i` of two distributions.
pub fn mutual_coincidence(p: &Population, q: &Population) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(dot(p.as_slice(), q.as_slice()))
}

/// Kullback-Leibler divergence `D(p|q) = sum_i p_i ln(p_i/q_i)`.
///
/// Terms with `p_i = 0` contribute zero; `q_i = 0` with `p_i > 0` is a
/// support mismatch.
pub fn kl_divergence(p: &Population, q: &Population) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut acc = 0.0;
    for (i, (&pi, &qi)) in p.as_slice().iter().zip(q.as_slice()).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::SupportMismatch { level: i });
        }
        acc += pi * (pi / qi).ln();
    }
    Ok(acc)
}

/// Symmetrized (Jeffreys) divergence `J(p, q) = D(p|q) + D(q|p)`.
pub fn jeffreys_divergence(p: &Population, q: &Population) -> Result<f64> {
    Ok(kl_divergence(p, q)? + kl_divergence(q, p)?)
}

/// Wootters statistical distance `arccos( sum_i sqrt(p_i q_i) )`.
///
/// The arccos argument is clamped to `[-1, 1]` to absorb rounding.
pub fn wootters_distance(p: &Population, q: &Population) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let overlap: f64 = p
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(&pi, &qi)| (pi * qi).sqrt())
        .sum();
    Ok(overlap.clamp(-1.0, 1.0).acos())
}

/// Centered level energies `E_i - mean(E)` of a bath.
pub fn centered_energy(bath: &BathSpec) -> Vec<f64> {
    let mean = bath.energies().iter().sum::<f64>() / bath.len() as f64;
    bath.energies().iter().map(|e| e - mean).collect()
}
