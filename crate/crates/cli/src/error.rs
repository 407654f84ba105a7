use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qng_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    /// 1 for bad input (including unreadable or unwritable paths), 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) | Self::Io { .. } => 1,
            Self::Numerical(_) => 2,
            Self::Core(e) if e.is_validation() => 1,
            Self::Core(_) => 2,
        }
    }
}

/// Short machine-readable tag for a core error, used in status columns.
pub fn status_tag(e: &qng_core::Error) -> &'static str {
    use qng_core::Error::*;
    match e {
        InvalidParameter { .. } => "invalid-parameter",
        Degenerate { .. } => "degenerate",
        Domain { .. } => "domain",
        QuadratureNonConvergence { .. } => "quadrature-nonconvergence",
        OptimizerNonConvergence { .. } => "optimizer-nonconvergence",
        CutoffTooSmall { .. } => "cutoff-too-small",
        UnitarityViolation { .. } => "unitarity-violation",
    }
}
