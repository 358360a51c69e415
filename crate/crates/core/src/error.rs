use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch: operands live in different truncated rings")]
    RingMismatch,
    #[error("expected {expected} entries, got {got} ({what})")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} = {value} out of range 0..={max}")]
    OutOfRange { what: &'static str, value: i64, max: i64 },
    #[error("series argument has nonzero constant term and is not nilpotent")]
    NotNilpotent,
    #[error("series has constant term {0}, expected 1 for a multiplicative class")]
    NotMultiplicative(String),
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("negative multiplicity {0} in a genuine bundle")]
    NegativeMultiplicity(i64),
    #[error("invalid root data: {0}")]
    InvalidRootData(String),
    #[error("invalid quotient model: {0}")]
    InvalidModel(String),
    #[error("model has no subgroup data")]
    NoSubgroup,
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error("betti numbers {0:?} are not palindromic")]
    NotPalindromic(Vec<usize>),
}

impl Error {
    pub(crate) fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            message: message.into(),
        }
    }
}
