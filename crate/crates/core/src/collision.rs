//! Partial-swap collision rules and the two-particle unitary oracle.
//!
//! The thermal strokes exchange population through a partial swap: with
//! weight `x` the engine and a fresh bath particle trade states,
//!
//! ```text
//! rho_s' = (1 - x) rho_s + x rho_b
//! rho_b' = (1 - x) rho_b + x rho_s
//! ```
//!
//! so the bath-side change is always the negative of the engine-side change.
//! Two microscopic generators reproduce this rule exactly on diagonal
//! (energy-basis) states:
//!
//! - the qubit exchange generator `U = exp(-i (phi/2) sum_k sigma_k (x) sigma_k)`,
//!   built here by scaling-and-squaring matrix exponentiation, and
//! - the multilevel phase generator `H = sum_ij phi_ij |ij><ji|` with a
//!   symmetric phase matrix, built from its exact 2x2 block rotations on the
//!   `{|ij>, |ji>}` subspaces (`|ii>` only acquires a phase).
//!
//! Both give swap weight `x = sin^2 phi`, preserve diagonality of reduced
//! states, and conserve total energy whenever both particles share a
//! spectrum. The oracle is capped at 16 levels per particle; it exists to
//! verify the population rules, not to scale.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statekit::Population;

/// Largest per-particle dimension accepted by the unitary oracle.
pub const MAX_ORACLE_DIM: usize = 16;

/// Hermiticity / trace tolerance for density-matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validates and wraps a density matrix. Hermiticity and unit trace are
    /// checked to `1e-10`; eigenvalues may undershoot zero by at most
    /// `1e-10`.
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected a nonempty square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let n = mat.nrows();
        for i in 0..n {
            for j in i..n {
                let diff = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if diff > DENSITY_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): asymmetry {diff:e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..n).map(|i| mat[(i, i)]).sum();
        if (trace - c(1.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace}, not 1"
            )));
        }
        let min_eig = hermitian_eigenvalues(&mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { mat })
    }

    /// The diagonal density matrix carrying a classical population.
    pub fn from_population(p: &Population) -> Self {
        let n = p.len();
        let mat = CMat::from_fn(n, n, |i, j| {
            if i == j {
                c(p.as_slice()[i])
            } else {
                c(0.0)
            }
        });
        Self { mat }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// The diagonal as a population (renormalized against rounding drift).
    pub fn diagonal_population(&self) -> Result<Population> {
        let diag: Vec<f64> = (0..self.dim()).map(|i| self.mat[(i, i)].re).collect();
        Population::renormalized(diag)
    }

    /// Largest off-diagonal magnitude; zero for classical states.
    pub fn max_coherence(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.mat[(i, j)].norm());
                }
            }
        }
        m
    }

    /// Von Neumann entropy `-sum_k lambda_k ln lambda_k` from a Hermitian
    /// eigendecomposition; eigenvalues within rounding of zero contribute
    /// nothing.
    pub fn von_neumann_entropy(&self) -> f64 {
        von_neumann_entropy_of(&self.mat)
    }
}

/// Eigenvalues of a Hermitian matrix (symmetrized first to absorb rounding).
fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigen().eigenvalues.iter().cloned().collect()
}

fn von_neumann_entropy_of(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .map(|l| if l > 1e-14 { -l * l.ln() } else { 0.0 })
        .sum()
}

/// Partial swap of two density matrices with weight `x` in `[0, 1]`:
/// returns `((1-x) a + x b, (1-x) b + x a)`.
pub fn density_swap(
    x: f64,
    rho_s: &DensityMatrix,
    rho_b: &DensityMatrix,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::XOutOfRange(x));
    }
    if rho_s.dim() != rho_b.dim() {
        return Err(Error::DimMismatch(format!(
            "density swap needs equal dimensions, got {} and {}",
            rho_s.dim(),
            rho_b.dim()
        )));
    }
    let s = rho_s.matrix().scale(1.0 - x) + rho_b.matrix().scale(x);
    let b = rho_b.matrix().scale(1.0 - x) + rho_s.matrix().scale(x);
    Ok((DensityMatrix::new(s)?, DensityMatrix::new(b)?))
}

/// Partial swap of two populations with weight `x` in `[0, 1]`.
pub fn population_swap(
    x: f64,
    p: &Population,
    q: &Population,
) -> Result<(Population, Population)> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::XOutOfRange(x));
    }
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let pp: Vec<f64> = p
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| (1.0 - x) * a + x * b)
        .collect();
    let qq: Vec<f64> = q
        .as_slice()
        .iter()
        .zip(p.as_slice())
        .map(|(a, b)| (1.0 - x) * a + x * b)
        .collect();
    Ok((Population::renormalized(pp)?, Population::renormalized(qq)?))
}

/// Which microscopic generator produced a two-particle unitary.
#[derive(Debug, Clone, PartialEq)]
pub enum SwapGenerator {
    /// `exp(-i (phi/2) sum_k sigma_k (x) sigma_k)` on two qubits.
    QubitSigma { phi: f64 },
    /// `exp(-i H)` with `H = sum_ij phi_ij |ij><ji|`, `phi` symmetric.
    MultilevelPhase { phi: DMatrix<f64> },
}

/// A two-particle unitary acting on the product of two `n`-level systems.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleUnitary {
    mat: CMat,
    n: usize,
    kind: SwapGenerator,
}

impl TwoParticleUnitary {
    /// The `n^2 x n^2` matrix in the lexicographic `|ij>` basis
    /// (`index = i n + j`, `i` first particle).
    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Per-particle dimension `n`.
    pub fn subsystem_dim(&self) -> usize {
        self.n
    }

    /// Generator metadata.
    pub fn kind(&self) -> &SwapGenerator {
        &self.kind
    }

    /// Largest entry of `U U^dag - I`; tests pin this to `1e-12`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.mat * self.mat.adjoint();
        let id = CMat::identity(self.mat.nrows(), self.mat.ncols());
        (prod - id)
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    }
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// The argument is scaled by `2^-s` until its Frobenius norm is at most
/// `1/4`, the series is summed to machine precision, and the result is
/// squared back up. Desk-scale dimensions only.
fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = a.norm();
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(1.0 / (2.0f64.powi(s as i32)));
    let mut result = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=30 {
        term = (&term * &scaled).scale(1.0 / k as f64);
        result += &term;
        if term.norm() < 1e-30 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// The qubit exchange unitary `exp(-i (phi/2) sum_k sigma_k (x) sigma_k)`,
/// built by scaling-and-squaring exponentiation of the Pauli generator. On
/// diagonal two-qubit inputs it realizes a partial swap with
/// `x = sin^2 phi`.
pub fn qubit_swap_unitary(phi: f64) -> TwoParticleUnitary {
    let i = Complex64::new(0.0, 1.0);
    let zero = c(0.0);
    let sx = CMat::from_row_slice(2, 2, &[zero, c(1.0), c(1.0), zero]);
    let sy = CMat::from_row_slice(2, 2, &[zero, -i, i, zero]);
    let sz = CMat::from_row_slice(2, 2, &[c(1.0), zero, zero, c(-1.0)]);
    let gen = sx.kronecker(&sx) + sy.kronecker(&sy) + sz.kronecker(&sz);
    let h = gen.scale(phi / 2.0);
    let mat = expm(&(h * (-i)));
    TwoParticleUnitary {
        mat,
        n: 2,
        kind: SwapGenerator::QubitSigma { phi },
    }
}

/// A constant phase matrix: `phi` on every off-diagonal pair, zero on the
/// diagonal. With this choice the multilevel generator realizes a uniform
/// partial swap of weight `sin^2 phi`.
pub fn uniform_phase_matrix(n: usize, phi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { phi })
}

/// The multilevel swap unitary `exp(-i H)` with
/// `H = sum_ij phi_ij |ij><ji|` for a symmetric real phase matrix.
///
/// `H` is block diagonal: each pair `{|ij>, |ji>}` (i < j) carries the 2x2
/// block `phi_ij sigma_x`, whose exponential is the exact rotation
/// `cos(phi_ij) I - i sin(phi_ij) sigma_x`, and each `|ii>` picks up the
/// phase `exp(-i phi_ii)`. Level `ij` therefore swaps completely at
/// `phi_ij = +-pi/2`. Dimensions above [`MAX_ORACLE_DIM`] are rejected.
pub fn multilevel_swap_unitary(phi: &DMatrix<f64>) -> Result<TwoParticleUnitary> {
    if !phi.is_square() {
        return Err(Error::DimMismatch(format!(
            "phase matrix must be square, got {}x{}",
            phi.nrows(),
            phi.ncols()
        )));
    }
    let n = phi.nrows();
    if n < 2 {
        return Err(Error::DimMismatch(format!(
            "phase matrix must be at least 2x2, got {n}x{n}"
        )));
    }
    if n > MAX_ORACLE_DIM {
        return Err(Error::DimTooLarge {
            n,
            max: MAX_ORACLE_DIM,
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (phi[(i, j)] - phi[(j, i)]).abs() > 1e-12 {
                return Err(Error::AsymmetricPhi { i, j });
            }
        }
    }
    let d = n * n;
    let mi = Complex64::new(0.0, -1.0);
    let mut mat = CMat::zeros(d, d);
    for i in 0..n {
        // |ii> acquires a pure phase.
        let idx = i * n + i;
        mat[(idx, idx)] = (mi * phi[(i, i)]).exp();
        for j in (i + 1)..n {
            let a = i * n + j;
            let b = j * n + i;
            let (cos, sin) = (phi[(i, j)].cos(), phi[(i, j)].sin());
            mat[(a, a)] = c(cos);
            mat[(b, b)] = c(cos);
            mat[(a, b)] = mi * sin;
            mat[(b, a)] = mi * sin;
        }
    }
    Ok(TwoParticleUnitary {
        mat,
        n,
        kind: SwapGenerator::MultilevelPhase { phi: phi.clone() },
    })
}

/// Post-collision joint state of the two particles, plus the entropy of the
/// (product) input for correlation bookkeeping.
#[derive(Debug, Clone)]
pub struct JointState {
    rho: CMat,
    dim: usize,
    input_entropy: f64,
}

impl JointState {
    /// The joint density matrix.
    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    /// Per-particle dimension.
    pub fn subsystem_dim(&self) -> usize {
        self.dim
    }

    /// Entropy `S(rho_1) + S(rho_2)` of the pre-collision product input.
    pub fn input_entropy(&self) -> f64 {
        self.input_entropy
    }

    /// Reduced state of the first particle.
    pub fn reduced_first(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(partial_trace(&self.rho, self.dim, Traced::Second))
    }

    /// Reduced state of the second particle.
    pub fn reduced_second(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(partial_trace(&self.rho, self.dim, Traced::First))
    }
}

/// Which particle a partial trace removes.
#[derive(Clone, Copy)]
enum Traced {
    First,
    Second,
}

/// Partial trace of an `n^2 x n^2` joint matrix in the `|ij>` basis.
fn partial_trace(rho: &CMat, n: usize, traced: Traced) -> CMat {
    let mut out = CMat::zeros(n, n);
    match traced {
        Traced::Second => {
            for i in 0..n {
                for k in 0..n {
                    let mut acc = c(0.0);
                    for j in 0..n {
                        acc += rho[(i * n + j, k * n + j)];
                    }
                    out[(i, k)] = acc;
                }
            }
        }
        Traced::First => {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = c(0.0);
                    for i in 0..n {
                        acc += rho[(i * n + j, i * n + l)];
                    }
                    out[(j, l)] = acc;
                }
            }
        }
    }
    out
}

/// Applies a two-particle unitary to a product input and returns both
/// reduced post-collision states together with the joint state.
pub fn collide(
    u: &TwoParticleUnitary,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<(DensityMatrix, DensityMatrix, JointState)> {
    let n = u.subsystem_dim();
    if rho1.dim() != n || rho2.dim() != n {
        return Err(Error::DimMismatch(format!(
            "unitary acts on {n}-level particles, inputs are {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let joint_in = rho1.matrix().kronecker(rho2.matrix());
    let joint_out = u.matrix() * joint_in * u.matrix().adjoint();
    let input_entropy = rho1.von_neumann_entropy() + rho2.von_neumann_entropy();
    let joint = JointState {
        rho: joint_out,
        dim: n,
        input_entropy,
    };
    let r1 = joint.reduced_first()?;
    let r2 = joint.reduced_second()?;
    Ok((r1, r2, joint))
}

/// Correlation scalars of a post-collision joint state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionCorrelations {
    /// `I = S(rho_1') + S(rho_2') - S(rho_12')`.
    pub mutual_information: f64,
    /// `S(rho_1') + S(rho_2') - S(rho_1) - S(rho_2)`; equals the mutual
    /// information whenever the collision was unitary on a product input.
    pub reduced_entropy_gain: f64,
}

/// Mutual information and reduced-entropy gain generated by a collision.
pub fn collision_correlations(joint: &JointState) -> Result<CollisionCorrelations> {
    let s1 = joint.reduced_first()?.von_neumann_entropy();
    let s2 = joint.reduced_second()?.von_neumann_entropy();
    let s12 = von_neumann_entropy_of(joint.matrix());
    Ok(CollisionCorrelations {
        mutual_information: s1 + s2 - s12,
        reduced_entropy_gain: s1 + s2 - joint.input_entropy(),
    })
}
