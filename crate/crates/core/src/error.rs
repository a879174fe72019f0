//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. Variants are
//! grouped by the layer that raises them: state construction, collision
//! algebra, cycle solving, observables, and bound evaluation.

use thiserror::Error;

/// Errors raised by swap-engine operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A bath specification is malformed (too few levels, non-finite
    /// energies, negative inverse temperature, or inconsistent labels).
    #[error("invalid bath: {0}")]
    InvalidBath(String),

    /// A probability vector failed validation.
    #[error("invalid population: {0}")]
    InvalidPopulation(String),

    /// Two vectors that must share a dimension do not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A divergence was requested between distributions whose supports are
    /// incompatible (q vanishes on a level where p does not).
    #[error("support mismatch at level {level}: q is zero where p is not")]
    SupportMismatch { level: usize },

    /// A swap weight lies outside the closed interval [0, 1].
    #[error("swap weight out of range: {0} (must lie in [0, 1])")]
    XOutOfRange(f64),

    /// Matrix or subsystem dimensions are inconsistent.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// A phase matrix for the multilevel swap generator is not symmetric.
    #[error("phase matrix must be symmetric: phi[{i}][{j}] != phi[{j}][{i}]")]
    AsymmetricPhi { i: usize, j: usize },

    /// The requested unitary oracle dimension exceeds the supported cap.
    #[error("unitary oracle dimension {n} exceeds the cap of {max}")]
    DimTooLarge { n: usize, max: usize },

    /// A density matrix failed its invariants (hermiticity, unit trace,
    /// positive semidefiniteness).
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// The cycle has no unique steady state because x_tilde = 0.
    #[error("degenerate cycle: x*R = 0 leaves every population stationary")]
    DegenerateCycle,

    /// Power iteration failed to converge.
    #[error("no convergence after {iterations} iterations (tol {tol:e})")]
    NoConvergence { iterations: usize, tol: f64 },

    /// A stochastic-matrix check failed.
    #[error("invalid stochastic matrix: {0}")]
    InvalidStochasticMatrix(String),

    /// Temperature (1/beta) was requested for a bath at beta = 0.
    #[error("temperature undefined at beta = 0 (ultra-hot bath)")]
    UltraHotTemperature,

    /// Two levels tie for the largest Clausius factor magnitude.
    #[error("ambiguous maximum: levels {i} and {j} tie in |D_i| within 1e-12")]
    AmbiguousMaximum { i: usize, j: usize },

    /// The dominated level carries no population change.
    #[error("zero population change at dominated level {level}")]
    ZeroChange { level: usize },

    /// Efficiency bounds were requested outside engine operation.
    #[error("not an engine: {0}")]
    NotAnEngine(String),

    /// A bound variant's precondition is unmet, so it was skipped.
    #[error("precondition unmet for {name}: {reason}")]
    PreconditionUnmet { name: &'static str, reason: String },

    /// A centered spectrum vanishes, so compression ratios are undefined.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// A scalar parameter lies outside its domain.
    #[error("parameter out of domain: {0}")]
    BadParameter(String),

    /// A simulation configuration is inconsistent.
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
