//! Error type shared across the simulator.

use thiserror::Error;

/// Errors produced by simulator operations.
#[derive(Debug, Error)]
pub enum SimError {
    /// Invalid or inconsistent run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Argument outside the validity domain of a model formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller violated an operation contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The benchmark solver found no feasible point.
    #[error("solver infeasible: {0}")]
    Infeasible(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
