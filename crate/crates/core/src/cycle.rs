//! Exact steady states of the four-stroke cycle and their Markov-chain
//! cross-check.
//!
//! Label the cycle corners by the stroke about to begin: `A` after the cold
//! collision (cold energies), `C` after the hot collision (hot energies).
//! Averaging the Bernoulli collision outcomes, one stroke pulls the engine
//! toward the fresh thermal population with weight `x_tilde = x R`, so the
//! steady corners solve a two-point fixed-point problem with closed form
//!
//! ```text
//! p_A = (p_h + p_c - x_tilde p_h) / (2 - x_tilde)
//! p_C = (p_h + p_c - x_tilde p_c) / (2 - x_tilde)
//! dp  = p_C - p_A = x_tilde / (2 - x_tilde) (p_h - p_c)
//! ```
//!
//! The same average stroke is the column-stochastic map
//! `K = x_tilde p_target 1^T + (1 - x_tilde) I`, and the corners are the
//! Perron vectors of `K_cold K_hot` and `K_hot K_cold`; power iteration
//! converges geometrically at rate `(1 - x_tilde)^2` per cycle and is kept
//! as a permanent independent route to the closed form.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::statekit::{CycleParams, DeltaPopulation, Population};

/// Default iteration cap for [`steady_state_by_iteration`].
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;

/// The steady cycle corners and their per-cycle difference.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// Population at the start of the cold-to-hot adiabatic stroke.
    pub p_a: Population,
    /// Population at the start of the hot-to-cold adiabatic stroke.
    pub p_c: Population,
    /// Per-cycle population change over the hot stroke, `p_C - p_A`.
    pub dp: DeltaPopulation,
}

/// Closed-form steady corners for thermal populations `p_cold`, `p_hot`.
///
/// Fails with [`Error::DegenerateCycle`] at `x_tilde = 0`, where every
/// population is stationary and no steady state is selected.
pub fn steady_populations(
    p_cold: &Population,
    p_hot: &Population,
    params: &CycleParams,
) -> Result<SteadyState> {
    if p_cold.len() != p_hot.len() {
        return Err(Error::LengthMismatch {
            expected: p_cold.len(),
            got: p_hot.len(),
        });
    }
    let xt = params.x_tilde();
    if xt == 0.0 {
        return Err(Error::DegenerateCycle);
    }
    let denom = 2.0 - xt;
    let n = p_cold.len();
    let mut a = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let pc = p_cold.as_slice()[i];
        let ph = p_hot.as_slice()[i];
        a.push((ph + pc - xt * ph) / denom);
        c.push((ph + pc - xt * pc) / denom);
        d.push(xt / denom * (ph - pc));
    }
    Ok(SteadyState {
        p_a: Population::renormalized(a)?,
        p_c: Population::renormalized(c)?,
        dp: DeltaPopulation::new(d)?,
    })
}

/// A validated column-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    mat: DMatrix<f64>,
}

impl StochasticMatrix {
    /// Validates entries in `[0, 1]` and unit column sums (tol `1e-12`).
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() < 2 {
            return Err(Error::InvalidStochasticMatrix(format!(
                "expected a square matrix of dimension >= 2, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        for j in 0..mat.ncols() {
            let mut sum = 0.0;
            for i in 0..mat.nrows() {
                let v = mat[(i, j)];
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidStochasticMatrix(format!(
                        "entry ({i}, {j}) = {v} outside [0, 1]"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidStochasticMatrix(format!(
                    "column {j} sums to {sum}, not 1"
                )));
            }
        }
        Ok(Self { mat })
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Applies the map to a probability vector.
    pub fn apply(&self, p: &Population) -> Result<Population> {
        if p.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        let n = self.dim();
        let mut out = vec![0.0; n];
        for j in 0..n {
            let pj = p.as_slice()[j];
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * pj;
            }
        }
        Population::renormalized(out)
    }
}

/// The averaged thermal-stroke operator
/// `K = x_tilde p_target 1^T + (1 - x_tilde) I`.
///
/// Column-stochastic by construction; its unique fixed probability vector is
/// `p_target` whenever `x_tilde > 0`.
pub fn markov_cycle_operator(p_target: &Population, x_tilde: f64) -> Result<StochasticMatrix> {
    if !x_tilde.is_finite() || !(0.0..=1.0).contains(&x_tilde) {
        return Err(Error::XOutOfRange(x_tilde));
    }
    let n = p_target.len();
    let mut mat = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut v = x_tilde * p_target.as_slice()[i];
            if i == j {
                v += 1.0 - x_tilde;
            }
            mat[(i, j)] = v;
        }
    }
    StochasticMatrix::new(mat)
}

/// Steady corners by power iteration on the stroke operators.
///
/// Returns the fixed points of `K_cold K_hot` (corner `A`) and
/// `K_hot K_cold` (corner `C`), iterating from the uniform distribution
/// until successive iterates differ by less than `tol` in L1, or failing
/// with [`Error::NoConvergence`] after `max_iter` cycles.
pub fn steady_state_by_iteration(
    k_cold: &StochasticMatrix,
    k_hot: &StochasticMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(Population, Population)> {
    if k_cold.dim() != k_hot.dim() {
        return Err(Error::LengthMismatch {
            expected: k_cold.dim(),
            got: k_hot.dim(),
        });
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::BadParameter(format!(
            "iteration tolerance must be positive, got {tol}"
        )));
    }
    let mut p_a = Population::uniform(k_cold.dim());
    for iter in 0..max_iter {
        let p_c = k_hot.apply(&p_a)?;
        let next = k_cold.apply(&p_c)?;
        let l1: f64 = next
            .as_slice()
            .iter()
            .zip(p_a.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum();
        p_a = next;
        if l1 < tol {
            let _ = iter;
            let p_c = k_hot.apply(&p_a)?;
            return Ok((p_a, p_c));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        tol,
    })
}
