use thiserror::Error;

/// Failure categories shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {what} on [{lo}, {hi}]")]
    NoConvergence { what: String, lo: f64, hi: f64 },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("accuracy error: {what} (estimate {estimate:e}, error {error:e})")]
    Accuracy {
        what: String,
        estimate: f64,
        error: f64,
    },

    #[error("pole proximity: |g(k)| = {magnitude:e} at k = {re}{im:+}i")]
    PoleProximity { re: f64, im: f64, magnitude: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable category, used on the CLI diagnostic stream.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NoConvergence { .. } => "no-convergence",
            Error::Consistency(_) => "consistency",
            Error::Accuracy { .. } => "accuracy",
            Error::PoleProximity { .. } => "pole-proximity",
            Error::Degenerate(_) => "degenerate",
            Error::Alignment(_) => "alignment",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}
