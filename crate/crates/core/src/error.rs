use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid rates: Gamma1 ({gamma1}) must be >= Gamma0 ({gamma0}) > 0")]
    InvalidRates { gamma0: f64, gamma1: f64 },
    #[error("no resonance: {0}")]
    NoResonance(String),
    #[error("spin generator null space has dimension != 1 (gap ratio {0:e})")]
    SingularGenerator(f64),
    #[error("|M| = {0:e} too small, elimination breaks down")]
    DegenerateM(f64),
    #[error("approximation invalid: {0}")]
    ApproxInvalid(String),
    #[error("moment system unstable (max Re eigenvalue {0:e})")]
    Unstable(f64),
    #[error("non-physical variance {0:e}")]
    NonPhysical(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Liouvillian kernel is degenerate (two starts differ by {0:e})")]
    DegenerateKernel(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("integrator step failure at t = {0}")]
    StepFailure(f64),
    #[error("Fock truncation cap exceeded (dim {0})")]
    TruncationCapExceeded(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
