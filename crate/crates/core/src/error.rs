use crate::cube::ValueKind;

/// Errors raised by table construction and the analysis operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {left} vs {right} coordinates")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coordinate {coord} out of range for n = {n}")]
    CoordinateOutOfRange { coord: usize, n: usize },

    #[error("value kind {found} not accepted here (expected {expected})")]
    Kind {
        expected: &'static str,
        found: ValueKind,
    },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: String,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("n = {n} exceeds the cap of {cap} coordinates")]
    TooLarge { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
