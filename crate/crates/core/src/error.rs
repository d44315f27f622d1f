use thiserror::Error;

use crate::chain::ErgodicityDiagnosis;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stochastic matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid probability vector: {0}")]
    InvalidVector(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("chain is not ergodic: {0}")]
    NonErgodic(ErgodicityDiagnosis),
    #[error("stationary solve did not converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },
    #[error("chain is not reversible (max detailed-balance residual {residual:.3e})")]
    NotReversible { residual: f64 },
    #[error("threshold {xi} not reached within {t_cap} steps")]
    Unbounded { xi: f64, t_cap: usize },
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("lambda = {lambda} violates the validity bound {bound}")]
    InvalidLambda { lambda: f64, bound: f64 },
    #[error("triple is not in class T: {0}")]
    NotInT(String),
    #[error("triple is not in class S: {0}")]
    NotInS(String),
    #[error("truncation too coarse: tail mass {tail:.3e} exceeds {limit}")]
    TruncationTooCoarse { tail: f64, limit: f64 },
    #[error("stationary tail beyond K_inner = {k_inner} is {tail:.3e} > 1/2")]
    TailTooHeavy { k_inner: usize, tail: f64 },
    #[error("nu does not have the form min(1/2, x^-a): {0}")]
    WrongNuShape(String),
    #[error("summability condition fails: {0}")]
    SummabilityFailure(String),
    #[error("skip {s} must be smaller than the trajectory length {n}")]
    SkipTooLarge { s: usize, n: usize },
    #[error("invalid band: xi / (1 - eps) = {value} must lie in (0, 1)")]
    InvalidBand { value: f64 },
    #[error("parameter out of range: {0}")]
    InvalidRange(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("mu is not absolutely continuous with respect to pi at state {state}")]
    NotAbsolutelyContinuous { state: usize },
    #[error("search budget of {budget} evaluations exhausted")]
    BudgetExhausted { budget: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
