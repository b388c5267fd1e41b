use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("ill-defined map: relation `{relation}` maps to `{image}`, which is nonzero in the target")]
    IllDefinedMap { relation: String, image: String },
    #[error("no preimage for `{0}`")]
    NoPreimage(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("torsion diagram does not commute at `{0}`")]
    DiagramViolation(String),
    #[error("anchor condition violated: {0}")]
    AnchorViolation(String),
    #[error("exactness violated: {0}")]
    ExactnessViolation(String),
    #[error("malformed denominator `{0}`: not of the form 1 + f*(element)")]
    MalformedDenominator(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
