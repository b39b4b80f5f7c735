use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("quadrature under-resolved: doubling nodes moved {quantity} by {shift:.3e} relative (limit {limit:.1e})")]
    UnderResolved { quantity: &'static str, shift: f64, limit: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty plateau window [{lo}, {hi}] (series length {len}, trust index {trust})")]
    EmptyWindow { lo: usize, hi: usize, len: usize, trust: usize },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(&'static str),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
