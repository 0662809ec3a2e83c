use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coefficient c_{j} is singular: [2j-1] vanishes with a nonzero numerator")]
    Singularity { j: String },
    #[error("construction inconsistency: {0}")]
    ConstructionInconsistency(String),
    #[error("deformation mismatch: q = {0} vs q = {1}")]
    DeformationMismatch(f64, f64),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
