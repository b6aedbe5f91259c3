//! Error type shared across the library.

use std::io;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("EmptyHorizon: simulation horizon must be at least 1")]
    EmptyHorizon,
    #[error("NonStationary: |lambda| = {lambda} is not inside the unit circle")]
    NonStationary { lambda: f64 },
    #[error("Uncontrollable: instrument has no effect on the target (B = 0)")]
    Uncontrollable,
    #[error("NoConvergence: no fixed point after {max_iter} iterations (residual {residual:e})")]
    NoConvergence { max_iter: usize, residual: f64 },
    #[error("UnboundedLoss: discounted loss diverges (beta * A^2 = {beta_a_sq})")]
    UnboundedLoss { beta_a_sq: f64 },
    #[error("NoRobustStabilizer: no gain on the grid stabilizes the whole uncertainty interval")]
    NoRobustStabilizer,
    #[error("NoStablePlan: commitment plan does not stay bounded")]
    NoStablePlan,
    #[error("IdentificationFailure: regressor Gram matrix is numerically singular")]
    IdentificationFailure,
    #[error("DegenerateOpenLoop: open-loop target deviation has zero dispersion")]
    DegenerateOpenLoop,
    #[error("SchemaError: {0}")]
    SchemaError(String),
    #[error("InsufficientData: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("Domain: {0}")]
    Domain(String),
    #[error("IOError: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    /// Stable short name, used by the CLI when mapping errors to exit codes.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyHorizon => "EmptyHorizon",
            Error::NonStationary { .. } => "NonStationary",
            Error::Uncontrollable => "Uncontrollable",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::UnboundedLoss { .. } => "UnboundedLoss",
            Error::NoRobustStabilizer => "NoRobustStabilizer",
            Error::NoStablePlan => "NoStablePlan",
            Error::IdentificationFailure => "IdentificationFailure",
            Error::DegenerateOpenLoop => "DegenerateOpenLoop",
            Error::SchemaError(_) => "SchemaError",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::Domain(_) => "Domain",
            Error::Io(_) => "IOError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
