use serde::{Deserialize, Serialize};

use crate::error::{param_err, Result};

/// Parameters shared by all methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Prox stepsize, or bundle proximal weight. Unused by Polyak.
    pub rho: f64,
    /// Bundle descent parameter in `(0, 1)`.
    pub beta: f64,
    /// Bundle stopping tolerance on the model gap.
    pub eps_stop: f64,
    /// Maximum number of steps.
    pub max_iter: usize,
    /// Runs stop once `F(x_k) − F* ≤ target_eps`.
    pub target_eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            beta: 0.5,
            eps_stop: 0.0,
            max_iter: 10_000,
            target_eps: 1e-6,
        }
    }
}

impl SolverConfig {
    /// Checks every field against its domain.
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(param_err("rho", "must be positive and finite"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(param_err("beta", "must lie in (0, 1)"));
        }
        if !(self.eps_stop >= 0.0) {
            return Err(param_err("eps_stop", "must be nonnegative"));
        }
        if self.max_iter == 0 {
            return Err(param_err("max_iter", "must be at least 1"));
        }
        if !(self.target_eps > 0.0) {
            return Err(param_err("target_eps", "must be positive"));
        }
        Ok(())
    }
}
