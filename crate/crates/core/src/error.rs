use thiserror::Error;

use crate::params::Route;

/// A parameter that violates the hypothesis of the requested route.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {constraint}")]
pub struct DomainError {
    pub field: &'static str,
    pub constraint: String,
}

impl DomainError {
    pub fn new(field: &'static str, constraint: impl Into<String>) -> Self {
        Self {
            field,
            constraint: constraint.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(#[from] DomainError),

    #[error("{route:?} did not converge after {terms} terms (tail estimate {tail_estimate:e})")]
    NonConvergence {
        route: Route,
        terms: usize,
        tail_estimate: f64,
    },

    #[error("quadrature failed: error estimate {error_estimate:e} after {evals} evaluations ({reason})")]
    QuadratureFailure {
        evals: usize,
        error_estimate: f64,
        reason: &'static str,
    },

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteSample { x: f64 },

    #[error("root finding did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
