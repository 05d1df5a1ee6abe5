use alloc::string::String;

/// Errors raised by problem construction, solvers and bound evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its valid domain.
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter {
        /// Offending field.
        field: &'static str,
        /// Human readable explanation.
        reason: String,
    },
    /// A point does not have the dimension of the problem.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension {
        /// Problem dimension.
        expected: usize,
        /// Dimension of the supplied point.
        actual: usize,
    },
    /// The problem lacks an oracle the solver needs.
    #[error("missing capability: {0}")]
    Capability(&'static str),
    /// The problem is in a state that does not permit the operation.
    #[error("invalid state: {0}")]
    State(&'static str),
    /// A zero subgradient was returned at a point with positive gap.
    #[error("oracle inconsistency at iteration {iteration}: vanishing subgradient with gap {gap:e}")]
    OracleInconsistency {
        /// Iteration index.
        iteration: usize,
        /// Objective gap at that iterate.
        gap: f64,
    },
    /// The subproblem solver failed to reach its tolerance.
    #[error("subproblem solver did not converge (residual {residual:e})")]
    Numerical {
        /// Primal-dual gap at the last iterate.
        residual: f64,
    },
    /// A bound formula needs a parameter that was not supplied.
    #[error("missing bound parameter `{0}`")]
    MissingParam(&'static str),
}

/// Crate result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn param_err(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        field,
        reason: reason.into(),
    }
}
