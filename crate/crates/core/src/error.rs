use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("u = {u} lies outside the tabulated range [{lo}, {hi}]")]
    OutOfTabulatedRange { u: f64, lo: f64, hi: f64 },

    #[error("value {0} is not in the range of the deformed exponential")]
    NotInRange(f64),

    #[error("deformed exponential is flat at value {0}; inverse is not defined")]
    FlatSegment(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("row {row}: {msg}")]
    InvalidRow { row: usize, msg: String },

    #[error("invalid probability pair: {0}")]
    InvalidPair(String),

    #[error("alpha = {0} must lie in the open interval (0, 1)")]
    AlphaOutOfRange(f64),

    #[error("normalization functional is {0} > 1 at kappa = 0; the deformed exponential is not convex on this input")]
    NormalizationAboveOne(f64),

    #[error("{which} integral of the phi-divergence diverges")]
    DivergentPhiIntegral { which: &'static str },

    #[error("phi-divergence denominator is not positive: {0}")]
    NonPositiveDenominator(f64),

    #[error("degenerate probe domain: {0}")]
    DegenerateDomain(String),

    #[error("minimization failed: {0}")]
    MinimizationFailed(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.position() {
            Some(pos) => Error::InvalidRow {
                row: pos.line() as usize,
                msg: e.to_string(),
            },
            None => Error::Parse(e.to_string()),
        }
    }
}
