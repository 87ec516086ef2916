use thiserror::Error;

/// Errors raised by the numerical kernels and the model layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Parameters fall outside every classification rule, or inside a
    /// degenerate corner the trace criterion does not cover.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("degenerate tau polynomial: slope is zero (c0 = {c0})")]
    DegenerateTau { c0: f64 },

    /// The floating-point monodromy trace disagrees with the regime selected
    /// from the exact parameter predicates.
    #[error("monodromy trace {trace} inconsistent with exact regime ({expected})")]
    TraceMismatch { trace: f64, expected: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that describe a parameter regime rather than a
    /// malformed request.
    pub fn is_regime_error(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedRegime(_)
                | Error::DegenerateTau { .. }
                | Error::TraceMismatch { .. }
                | Error::InvalidState(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
