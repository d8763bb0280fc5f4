//! Crate-wide error type. Every fallible operation returns [`Error`]; panics
//! are reserved for broken internal invariants.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("degree {got} too small: need at least {min}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("degenerate transformation: matrix determinant is zero")]
    DegenerateTransformation,

    #[error("weight {weight} is below the polynomial degree {degree}")]
    WeightTooSmall { weight: usize, degree: usize },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("reducible model: f is an e-th power times a scalar for e = {witness}, a divisor of n = {n}")]
    ReducibleModel { n: u64, witness: u64 },

    #[error(
        "inadmissible signature: Riemann-Hurwitz gives genus {value}, not a nonnegative integer"
    )]
    InadmissibleSignature { value: String },

    #[error("genus {0} is below 2; the automorphism bound needs genus at least 2")]
    GenusTooSmall(u64),

    #[error("empty search space: no signature in the box has a positive Riemann-Hurwitz value")]
    EmptySearchSpace,

    #[error("rigid or empty stratum: 3g' - 3 + s = {0} is negative")]
    RigidStratum(i64),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("containment edge {from} -> {to}: {reason}")]
    Containment { from: u32, to: u32, reason: String },

    #[error("unknown case number {0}")]
    UnknownCase(u32),

    #[error("missing parameter `{0}`")]
    MissingParameter(String),

    #[error("unexpected parameter `{0}`")]
    UnexpectedParameter(String),

    #[error("degenerate instantiation: {0}")]
    DegenerateInstantiation(String),

    #[error("classification requires genus 4, got {0}")]
    GenusPrecondition(u64),

    #[error("degree n = {0} is outside the genus-4 superelliptic table")]
    OutsideTable(u64),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
