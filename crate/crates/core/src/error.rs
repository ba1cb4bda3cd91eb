use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("form degree overflow: {0} + {1} > 4")]
    DegreeOverflow(usize, usize),
    #[error("exterior derivative of a 4-form")]
    TopDegree,
    #[error("expected a {expected}-form, got degree {got}")]
    Degree { expected: usize, got: usize },
    #[error("operation not supported by the {0} backend")]
    Backend(&'static str),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("torus integral is not real")]
    NonReal,
    #[error("missing field: {0}")]
    MissingField(&'static str),
    #[error("coupling constraint violated: {0}")]
    Coupling(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
