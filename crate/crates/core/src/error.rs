use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    /// Phase labels only exist for the PT-symmetric case `delta == 0`.
    #[error("phase classification needs delta = 0, got delta = {delta}")]
    NotPtSymmetric { delta: f64 },
    #[error("band edge absent: radicand {radicand} is negative")]
    EdgeAbsent { radicand: f64 },
    #[error("QR iteration did not converge for eigenvalue {index} after {iterations} sweeps")]
    ConvergenceFailure { index: usize, iterations: usize },
    #[error("eigenpair {index} residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { index: usize, residual: f64, tol: f64 },
    #[error("eigenvalue sum misses the trace by {defect:e} (tolerance {tol:e})")]
    TraceMismatch { defect: f64, tol: f64 },
    #[error("seed eigenvalue {seed} not found in the spectrum at gamma = {gamma}")]
    SeedMismatch { seed: num_complex::Complex64, gamma: f64 },
    #[error("eigenvalue tracking lost at gamma = {gamma}: {candidates} candidates within bound {bound:e}")]
    TrackingLost { gamma: f64, candidates: usize, bound: f64 },
    #[error("scattering system is numerically singular at pivot {pivot}")]
    SingularSystem { pivot: usize },
    #[error("detangled spectrum differs by {max_distance:e} (tolerance {tol:e})")]
    EquivalenceFailure { max_distance: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}
