use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};

/// Inputs of the iteration bounds. Every field is optional; each formula
/// lists the ones it needs and reports the first missing one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    /// `‖x0 − x*‖`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist0: Option<f64>,
    /// `F(x0) − F*`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap0: Option<f64>,
    /// Prox stepsize or bundle proximal weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Bundle descent parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Bound on subgradient norms.
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
    /// Growth coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Growth exponent (informational; lifts carry their own exponents).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Target accuracy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Bound on the distance of every iterate to `x*`.
    #[serde(default, rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Bundle `η₀ = F̃⁰(z₁) + (ρ/2)‖z₁ − x₀‖²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta0: Option<f64>,
    /// `F(x0)`, used with `eta0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<f64>,
    /// Bundle null-step constant; defaults to `4L²/ρ`.
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
}

impl BoundParams {
    pub(crate) fn get(&self, field: &'static str) -> Result<f64> {
        let (value, ok): (Option<f64>, fn(f64) -> bool) = match field {
            "dist0" => (self.dist0, |v| v >= 0.0),
            "gap0" => (self.gap0, |v| v >= 0.0),
            "rho" => (self.rho, |v| v > 0.0),
            "beta" => (self.beta, |v| v > 0.0 && v < 1.0),
            "L" => (self.lipschitz, |v| v > 0.0),
            "alpha" => (self.alpha, |v| v > 0.0),
            "p" => (self.p, |v| v >= 1.0),
            "epsilon" => (self.epsilon, |v| v > 0.0),
            "D" => (self.d, |v| v > 0.0),
            "eta0" => (self.eta0, |_| true),
            "f0" => (self.f0, |_| true),
            "M" => (self.m, |v| v > 0.0),
            _ => unreachable!("unknown bound field {field}"),
        };
        let v = value.ok_or(Error::MissingParam(field))?;
        if v.is_finite() && ok(v) {
            Ok(v)
        } else {
            Err(param_err(field, "outside its domain"))
        }
    }

    /// `ᾱ = min{1, α/ρ}`.
    pub fn alpha_bar(&self) -> Result<f64> {
        Ok((self.get("alpha")? / self.get("rho")?).min(1.0))
    }
}
