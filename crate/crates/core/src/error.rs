use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A†| = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },
    #[error("density matrix has eigenvalue {min_eigenvalue:e} below the positivity tolerance")]
    NotPositive { min_eigenvalue: f64 },
    #[error("ket is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("inverse temperature must be non-negative, got {0}")]
    InvalidBeta(f64),
    #[error("relative entropy diverges: first state has weight {weight:e} outside the support of the second")]
    DivergentRelativeEntropy { weight: f64 },
    #[error("transition frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("propagation lost positivity at t = {time:e} s (min eigenvalue {min_eigenvalue:e})")]
    PositivityLost { time: f64, min_eigenvalue: f64 },
    #[error("propagation drifted in trace at t = {time:e} s (trace {trace})")]
    TraceDrift { time: f64, trace: f64 },
    #[error(
        "limit cycle did not converge after {iterations} iterations (last change {last_delta:e})"
    )]
    LimitCycleNotConverged { iterations: usize, last_delta: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
