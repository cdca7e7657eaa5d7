//! Error types shared across the crate.

use thiserror::Error;

/// Unified error type for construction, evaluation and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// Expression text could not be parsed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive ODE integrator failed to meet its tolerance.
    #[error("ODE integration failed: {0}")]
    Ode(String),

    /// The adaptive quadrature failed to converge.
    #[error("quadrature failed: {0}")]
    Quadrature(String),

    /// A constructed parameter function is singular at the requested time.
    #[error("singular at t = {t}: {msg}")]
    Singular { t: f64, msg: String },

    /// A seed evaluation hit a pole or left its validity region.
    #[error("seed evaluation failed: {0}")]
    Seed(String),

    /// Catalog data is malformed or a family id / parameter is unknown.
    #[error("catalog error: {0}")]
    Catalog(String),

    /// Inconsistent or out-of-range initial data.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A grid specification is out of range or malformed.
    #[error("grid error: {0}")]
    Grid(String),

    /// Verification produced a residual above tolerance.
    #[error("verification failed: {0}")]
    Verify(String),

    /// Root finding could not bracket or converge on a root.
    #[error("root finding failed: {0}")]
    RootFind(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
