use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} is invalid: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("beta must be < 1 (a massive particle cannot reach c), got {0}")]
    Superluminal(f64),

    #[error("weak-field metric requires |2 phi_g / c^2| < 1, got {0}")]
    StrongField(f64),

    #[error("g00 must be positive, got {0}")]
    NonPositiveMetric(f64),

    #[error("insufficient statistics: {have} regular events, need at least {need}")]
    InsufficientStatistics { have: u64, need: u64 },

    #[error("wavefunction nearly vanishes at node {node} (|psi| = {magnitude:e})")]
    DivisionHazard { node: usize, magnitude: f64 },

    #[error("eigen-iteration did not converge for level {level} (residual {residual:e})")]
    NonConvergence { level: usize, residual: f64 },

    #[error("level {level} is not normalized: integral |psi|^2 dx = {norm}")]
    Unnormalized { level: usize, norm: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
