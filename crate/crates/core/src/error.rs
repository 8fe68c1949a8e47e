use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimMismatch(usize, usize, usize, usize),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {0:.3e})")]
    NotHermitian(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("parameter out of range: {name} = {value} not in {domain}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("Pearson correlation is singular: variance of {0} vanishes")]
    SingularVariance(&'static str),

    #[error("conditional probability undefined: P(b = {0}) = 0")]
    UndefinedConditional(&'static str),

    #[error("setting map incomplete or inconsistent: {0}")]
    BadSettingMap(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid scan spec: {0}")]
    InvalidSpec(String),

    #[error("objective has no valid cells in the given domain")]
    EmptyObjective,
}
