use thiserror::Error;

/// Errors raised by roster handling and the apportionment algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty roster")]
    EmptyRoster,
    #[error("duplicate state code `{0}`")]
    DuplicateCode(String),
    #[error("empty state code on line {line}")]
    EmptyCode { line: usize },
    #[error("invalid population `{value}` for `{code}`: expected a positive integer")]
    InvalidPopulation { code: String, value: String },
    #[error("malformed roster: {0}")]
    Malformed(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error(
        "infeasible: {seats} seats cannot cover the {required} seats guaranteed to {states} states"
    )]
    Infeasible {
        seats: u64,
        required: u64,
        states: usize,
    },
    #[error("cap infeasible: {states} states x cap {cap} < house size {house}")]
    CapInfeasible { states: usize, cap: u32, house: u32 },
    #[error("tie at the last awarded seat between states {states:?}")]
    Tie { states: Vec<usize> },
    #[error("seat vector is not reproducible by any {0}")]
    Inconsistent(&'static str),
    #[error("ambiguous seat transfer at exponent {exponent}: pairs {pairs:?} tie")]
    AmbiguousTransfer {
        exponent: f64,
        pairs: Vec<(usize, usize)>,
    },
    #[error("no critical exponent: {0}")]
    NoCriticalExponent(&'static str),
    #[error("target unattainable: {0}")]
    Unattainable(String),
    #[error("vectors are not comparable: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
