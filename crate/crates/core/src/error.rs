use thiserror::Error;

/// Errors raised by grid construction, operator evaluation and time stepping.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degenerate radius profile: min r = {min} (at node {index})")]
    DegenerateProfile { min: f64, index: usize },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("oracle undefined for center gap {gap} (|gap| must be <= 1)")]
    OracleDomain { gap: f64 },

    #[error("CFL violation at step {step}: courant number {courant} >= 1")]
    CflViolation { step: usize, courant: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
