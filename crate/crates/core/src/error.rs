use thiserror::Error;

/// Errors raised by the library. The variant name doubles as the machine
/// readable `kind` in CLI error reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coordinates z{} and z{} coincide", .0 + 1, .1 + 1)]
    Singularity(usize, usize),
    #[error("path segment {segment} comes within {min_distance:.3e} of a diagonal; step size underflow")]
    SingularityProximity { segment: usize, min_distance: f64 },
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("violation: {0}")]
    Violation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Shape(_) => "shape",
            Error::Domain(_) => "domain",
            Error::Singularity(..) => "singularity",
            Error::SingularityProximity { .. } => "singularity_proximity",
            Error::Consistency(_) => "consistency",
            Error::Violation(_) => "violation",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
