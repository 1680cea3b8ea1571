use std::path::PathBuf;

use crossstitch_core::Error as CoreError;

/// Process exit status for configuration problems.
pub const EXIT_CONFIG: u8 = 2;
/// Process exit status for numerical failures.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("missing required key `{key}` for `{command}`")]
    MissingKey { key: String, command: &'static str },
    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config {path}: {source}")]
    ParseConfig { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid parameter: {0}")]
    Parameter(CoreError),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error("{failed} of {total} grid points failed")]
    FailedPoints { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) | CliError::FailedPoints { .. } => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. } | CoreError::NotPtSymmetric { .. } => CliError::Parameter(e),
            _ => CliError::Numerical(e),
        }
    }
}

/// Short machine-readable code for the status column of a failed point.
pub fn status_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::InvalidParameter { .. } => "invalid_parameter",
        CoreError::NotPtSymmetric { .. } => "not_pt_symmetric",
        CoreError::EdgeAbsent { .. } => "edge_absent",
        CoreError::ConvergenceFailure { .. } => "convergence_failure",
        CoreError::ResidualTooLarge { .. } => "residual_too_large",
        CoreError::TraceMismatch { .. } => "trace_mismatch",
        CoreError::SeedMismatch { .. } => "seed_mismatch",
        CoreError::TrackingLost { .. } => "tracking_lost",
        CoreError::SingularSystem { .. } => "singular_system",
        CoreError::EquivalenceFailure { .. } => "equivalence_failure",
        CoreError::DimensionMismatch { .. } => "dimension_mismatch",
    }
}
