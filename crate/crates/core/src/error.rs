use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SrgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),
    #[error("invalid signal class: {0}")]
    InvalidClass(String),
    #[error("invalid system expression: {0}")]
    InvalidExpr(String),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("indeterminate product: {0}")]
    IndeterminateProduct(String),
    #[error("not simulable at node `{node}`: {reason}")]
    NotSimulable { node: String, reason: String },
    #[error("Nyquist curve is unbounded: pole on the imaginary axis at omega = {omega}")]
    UnboundedNyquist { omega: f64 },
    #[error("no analytic SRG bound for node `{0}`")]
    NoAnalyticBound(String),
    #[error("simulation failed for pair {pair}: {source}")]
    PairFailed {
        pair: usize,
        #[source]
        source: Box<SrgError>,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl SrgError {
    /// True for errors caused by malformed input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            SrgError::Dimension(_)
                | SrgError::InvalidClass(_)
                | SrgError::InvalidExpr(_)
                | SrgError::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, SrgError>;
