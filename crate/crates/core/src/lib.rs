//! swap-engine: a multilevel four-stroke partial-swap heat engine.
//!
//! The machine is an N-level system shuttled between two collision baths by
//! a four-stroke cycle: two adiabatic strokes that remap level energies at
//! frozen populations, and two thermal strokes in which the engine collides
//! with a fresh thermal particle and exchanges population through a partial
//! swap of weight `x` (applied with probability `R`). Because the strokes
//! never generate coherences in the energy basis, the exact steady state,
//! all first-law observables, a ladder of Clausius-type inequalities, bath
//! purity backreaction, and a family of work/efficiency bounds are available
//! in closed form; this crate implements them together with an exact
//! two-particle unitary oracle and a stochastic cycle simulator that
//! cross-check the closed forms.
//!
//! Module map:
//!
//! - [`statekit`]    bath/population value types and statistical functionals
//! - [`collision`]   partial-swap rules and the two-particle unitary oracle
//! - [`cycle`]       exact steady states and the Markov cycle operator
//! - [`thermo`]      per-cycle observables, Clausius numbers, bath purity
//! - [`bounds`]      necessary conditions and work/efficiency bounds
//! - [`regimes`]     ultra-hot expansion, compression optima, quasi-statics
//! - [`montecarlo`]  seeded stochastic simulation of the collision cycle

pub mod bounds;
pub mod collision;
pub mod cycle;
pub mod error;
pub mod montecarlo;
pub mod regimes;
pub mod statekit;
pub mod thermo;

pub use error::{Error, Result};
pub use statekit::{BathLabel, BathSpec, CycleParams, DeltaPopulation, Population};
