//! Deterministic toolkit for studying how entanglement survives chains of
//! sequential measurements on a two-qubit state.
//!
//! The crate is organised around a small simulation core and a set of
//! analysis layers on top of it:
//!
//! - [`linalg`]: dense complex matrices at qubit sizes with a cyclic-Jacobi
//!   Hermitian eigensolver and partial transposition.
//! - [`quantum`]: two-qubit states, measurement strategies (projective, weak,
//!   probabilistic-projective) and their Kraus/POVM realisations.
//! - [`scenario`]: unilateral and bilateral observer chains, joint and
//!   marginal outcome statistics, pre-measurement states per observer pair.
//! - [`criteria`]: the three correlation criteria (mutual information, sum of
//!   matched conditional probabilities, Pearson coefficient) evaluated both
//!   through the simulator and through closed-form reference expressions.
//! - [`witness`]: PPT entanglement ground truth plus closed-form eigenvalue
//!   and mixedness families for cross-checking.
//! - [`explore`]: grid scans, maximin optimisation and implicit-boundary
//!   tracing over the measurement parameters.
//! - [`verify`] / [`reproduce`]: seeded equivalence suites and the golden
//!   table of headline numbers.
//!
//! Everything is pure and deterministic: identical inputs produce identical
//! outputs bit for bit, regardless of worker count.

pub mod criteria;
pub mod explore;
pub mod linalg;
pub mod quantum;
pub mod reproduce;
pub mod rng;
pub mod scenario;
pub mod verify;
pub mod witness;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
