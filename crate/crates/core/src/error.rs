use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ||A - A^dagger||_F = {residual:e} exceeds {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable `{label}`: {reason}")]
    InvalidObservable { label: String, reason: String },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("parameter `{name}` = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("noise placement `{0}` requires a noise channel")]
    MissingNoise(String),

    #[error("observables `{first}` and `{second}` do not commute: ||[A,B]||_F = {residual:e}")]
    NonCommuting {
        first: String,
        second: String,
        residual: f64,
    },

    #[error("trace has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("state does not violate the inequality (S = {0}); threshold undefined")]
    NoViolation(f64),

    #[error("scenario has {count} measurements, above the enumeration limit of {limit}")]
    EnumerationLimit { count: usize, limit: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid behavior: {0}")]
    InvalidBehavior(String),

    #[error("violation is not monotone in p: {0}")]
    NonMonotone(String),

    #[error("pictures disagree by {residual:e} on context {context}")]
    PictureMismatch { context: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
