use thiserror::Error;

pub type Result<T, E = RiskError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum RiskError {
    /// A scalar argument fell outside its admissible range.
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Input is well formed but the requested quantity is undefined for it
    /// (e.g. a Lorenz curve of a zero-mean sample).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RiskError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        RiskError::InvalidInput(msg.into())
    }

    /// True for failures caused by numerics rather than by the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, RiskError::NonFinite { .. })
    }
}

/// Checks `lo <= value <= hi` (or the half-open variants) and produces a
/// [`RiskError::Domain`] otherwise.
pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    domain: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(RiskError::Domain {
            name,
            value,
            domain,
        })
    }
}
