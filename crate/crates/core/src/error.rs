use thiserror::Error;

/// Errors raised by the pulse-construction and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a mathematical function or operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A pulse description with missing, extra, or non-positive parameters.
    #[error("invalid pulse spec: {0}")]
    InvalidSpec(String),

    /// A grid that violates its own invariants (dt <= 0, n < 2, non-finite origin).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The grid truncates a waveform that has not decayed at its edges.
    #[error("coverage error: {0}")]
    Coverage(String),

    /// A required time (t = 0, a lag, a delay) does not fall on a grid sample.
    #[error("grid alignment error: {0}")]
    GridAlignment(String),

    /// Two waveforms that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A trace does not have the shape an operation requires (e.g. no half-height crossing).
    #[error("shape error: {0}")]
    Shape(String),

    /// Carrier and sampling rate are incompatible.
    #[error("sampling error: {0}")]
    Sampling(String),
}

impl Error {
    /// True for errors caused by the caller's configuration rather than by numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec(_) | Error::InvalidGrid(_) | Error::Domain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
