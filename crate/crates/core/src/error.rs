use thiserror::Error;

/// Errors produced by fitting, evaluation, simulation and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("natural parameter {eta:?} is outside the parameter space of {family}")]
    Domain { family: String, eta: Vec<f64> },

    #[error("value {x} is outside the support of {family}")]
    Support { family: String, x: f64 },

    #[error("invalid family specification: {0}")]
    InvalidSpec(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("class {0} has no observations")]
    EmptyClass(usize),

    #[error("label {label} is out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("{0} is not supported for this family")]
    Unsupported(String),

    #[error("did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
