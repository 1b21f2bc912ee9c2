use thiserror::Error;

/// Errors produced by construction and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A domain type was constructed with out-of-range parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A raw two-photon slit state violated the required exchange symmetry
    /// (c11 = c22 and c12 = c21) beyond tolerance.
    #[error("asymmetric slit excitation: {0}")]
    AsymmetricState(String),

    /// A quadrature or propagation computation failed to meet its error
    /// tolerance within the refinement cap.
    #[error("quadrature did not converge: estimated relative error {estimate:.3e} > tolerance {tolerance:.3e}")]
    NonConvergent { estimate: f64, tolerance: f64 },

    /// A requested tabulation would exceed the configured memory budget.
    #[error("sample counts exceed memory budget: {0}")]
    MemoryBudget(String),

    /// A Monte Carlo trial failed to complete within its bunch budget.
    #[error("trial {trial} did not complete within {budget} bunches; check node_threshold and weighting")]
    TrialBudgetExceeded { trial: usize, budget: u64 },

    /// A fit was requested on data that cannot support it.
    #[error("insufficient data for fit: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reject non-finite or non-positive parameter values.
pub(crate) fn require_positive(value: f64, name: &str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Reject non-finite or negative parameter values.
pub(crate) fn require_non_negative(value: f64, name: &str) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}
