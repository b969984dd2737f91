use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("no convergence (last {last:e}, previous {previous:e})")]
    NoConvergence { last: f64, previous: f64 },
    #[error("divergent series: {0}")]
    Divergence(String),
    #[error("integrand not integrable: {0}")]
    Integrability(String),
    #[error("unsupported argument: {0}")]
    Unsupported(String),
    #[error("dimension {0} too large for direct summation")]
    DimensionTooLarge(usize),
    #[error("tail of the lattice sum cannot be bounded: {0}")]
    TailUnbounded(String),
    #[error("pole and zero do not cancel: {0}")]
    NonCancelling(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("polynomial does not divide exactly: {0}")]
    NonDivisible(String),
    #[error("E terms did not cancel: {0}")]
    EResidue(String),
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error in record {id}: {msg}")]
    Schema { id: String, msg: String },
    #[error("duplicate record id {0}")]
    DuplicateId(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
