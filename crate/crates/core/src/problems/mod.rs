//! Oracles, built-in test functions with certified growth, and the lifted
//! auxiliary function used by the rate-lifting arguments.

mod builtin;
mod lift;
mod max_affine;
mod radial;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};
use crate::point::{norm, Point};

pub use builtin::{make_builtin, ProblemKind, ProblemParams, ProblemSpec};
pub use lift::{lift_general, lift_higher, LiftedProblem};
pub use max_affine::MaxAffine;
pub use radial::{RadialNorm, RadialProfile};

/// First-order oracle for a convex function on ℝⁿ.
///
/// Implementations must be pure: the same input always yields the same output.
pub trait Oracle: Send + Sync + fmt::Debug {
    /// Dimension `n`.
    fn dim(&self) -> usize;

    /// `F(x)`.
    fn value(&self, x: &[f64]) -> f64;

    /// `F(x)` and one element of `∂F(x)`.
    fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>);

    /// Whether [`prox`](Self::prox) is implemented.
    fn has_prox(&self) -> bool {
        false
    }

    /// `prox_{ρ,F}(x)`, or `None` when the function has no prox oracle.
    fn prox(&self, _x: &[f64], _rho: f64) -> Option<Result<Vec<f64>>> {
        None
    }
}

/// Hölder growth `F(x) ≥ F* + α‖x − x*‖ᵖ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    /// Exponent `p ≥ 1`.
    pub exponent: f64,
    /// Coefficient `α > 0`.
    pub coefficient: f64,
}

impl GrowthCertificate {
    /// Validated certificate.
    pub fn new(exponent: f64, coefficient: f64) -> Result<Self> {
        if !(exponent >= 1.0 && exponent.is_finite()) {
            return Err(param_err("p", "growth exponent must be a finite value ≥ 1"));
        }
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(param_err("alpha", "growth coefficient must be positive and finite"));
        }
        Ok(Self {
            exponent,
            coefficient,
        })
    }
}

/// The objective behind a [`ProblemInstance`].
#[derive(Debug, Clone)]
pub enum Function {
    /// `F* + α‖x − c‖ᵖ`.
    Radial(RadialNorm),
    /// Pointwise maximum of affine pieces.
    MaxAffine(MaxAffine),
    /// `max{F, F* + c‖x − x*‖ᵖ}` over another instance.
    Lifted(Box<LiftedProblem>),
    /// User supplied oracle.
    Custom(Arc<dyn Oracle>),
}

impl Function {
    fn dim(&self) -> usize {
        match self {
            Function::Radial(f) => f.dim(),
            Function::MaxAffine(f) => f.dim(),
            Function::Lifted(f) => f.base().dim(),
            Function::Custom(f) => f.dim(),
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self {
            Function::Radial(f) => f.value(x),
            Function::MaxAffine(f) => f.value(x),
            Function::Lifted(f) => f.value(x),
            Function::Custom(f) => f.value(x),
        }
    }

    fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
        match self {
            Function::Radial(f) => f.evaluate(x),
            Function::MaxAffine(f) => f.evaluate(x),
            Function::Lifted(f) => f.evaluate(x),
            Function::Custom(f) => f.evaluate(x),
        }
    }

    fn prox(&self, x: &[f64], rho: f64) -> Option<Result<Vec<f64>>> {
        match self {
            Function::Radial(f) => Some(Ok(f.prox(x, rho))),
            Function::MaxAffine(f) => Some(f.prox(x, rho)),
            Function::Lifted(f) => f.prox(x, rho),
            Function::Custom(f) => f.prox(x, rho),
        }
    }

    fn has_prox(&self) -> bool {
        match self {
            Function::Radial(_) | Function::MaxAffine(_) => true,
            Function::Lifted(f) => f.base().has_prox(),
            Function::Custom(f) => f.has_prox(),
        }
    }

    /// `(center, F*, h)` when the function is `F* + h(‖x − center‖)`.
    fn radial_profile(&self) -> Option<(&Point, f64, RadialProfile)> {
        match self {
            Function::Radial(f) => Some((&f.center, f.f_star, RadialProfile::single(f.alpha, f.p))),
            Function::Lifted(f) => f.radial_profile(),
            _ => None,
        }
    }
}

/// A convex objective with certified metadata: minimizer, optimal value,
/// optional growth certificate and a subgradient norm bound.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    function: Function,
    minimizer: Point,
    min_value: f64,
    growth: Option<GrowthCertificate>,
    lipschitz: f64,
    radius: f64,
}

impl ProblemInstance {
    /// Wraps a custom oracle. `lipschitz` bounds subgradient norms over the
    /// region of interest; `minimizer` and `min_value` must be exact.
    pub fn custom(
        oracle: Arc<dyn Oracle>,
        minimizer: Point,
        min_value: f64,
        growth: Option<GrowthCertificate>,
        lipschitz: f64,
    ) -> Result<Self> {
        if oracle.dim() != minimizer.dim() {
            return Err(Error::Dimension {
                expected: oracle.dim(),
                actual: minimizer.dim(),
            });
        }
        Self::from_parts(Function::Custom(oracle), minimizer, min_value, growth, lipschitz, f64::INFINITY)
    }

    pub(crate) fn from_parts(
        function: Function,
        minimizer: Point,
        min_value: f64,
        growth: Option<GrowthCertificate>,
        lipschitz: f64,
        radius: f64,
    ) -> Result<Self> {
        if !min_value.is_finite() {
            return Err(param_err("f_star", "optimal value must be finite"));
        }
        if !(lipschitz > 0.0) {
            return Err(param_err("lipschitz", "must be positive"));
        }
        Ok(Self {
            function,
            minimizer,
            min_value,
            growth,
            lipschitz,
            radius,
        })
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.function.dim()
    }

    /// The underlying function.
    pub fn function(&self) -> &Function {
        &self.function
    }

    /// `x*`.
    pub fn minimizer(&self) -> &Point {
        &self.minimizer
    }

    /// `F* = F(x*)`.
    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// Growth certificate, if the construction guarantees one.
    pub fn growth(&self) -> Option<GrowthCertificate> {
        self.growth
    }

    /// Bound `L` on subgradient norms within [`radius`](Self::radius) of `x*`.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Radius of the ball around `x*` on which `lipschitz` holds.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Whether a prox oracle is available.
    pub fn has_prox(&self) -> bool {
        self.function.has_prox()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// `F(x)`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.function.value(x))
    }

    /// `F(x)` and a subgradient. Ties between active pieces resolve to the
    /// lowest index; radial kinds return zero at their center.
    pub fn evaluate(&self, x: &[f64]) -> Result<(f64, Point)> {
        self.check_dim(x)?;
        let (v, g) = self.function.evaluate(x);
        Ok((v, Point::from_vec_unchecked(g)))
    }

    /// `prox_{ρ,F}(x) = argmin F(·) + ‖· − x‖²/(2ρ)`.
    pub fn prox(&self, x: &[f64], rho: f64) -> Result<Point> {
        self.check_dim(x)?;
        if !(rho > 0.0) {
            return Err(param_err("rho", "must be positive"));
        }
        self.prox_raw(x, rho).map(Point::from_vec_unchecked)
    }

    pub(crate) fn value_raw(&self, x: &[f64]) -> f64 {
        self.function.value(x)
    }

    pub(crate) fn eval_raw(&self, x: &[f64]) -> (f64, Vec<f64>) {
        self.function.evaluate(x)
    }

    pub(crate) fn prox_raw(&self, x: &[f64], rho: f64) -> Result<Vec<f64>> {
        self.function
            .prox(x, rho)
            .unwrap_or(Err(Error::Capability("prox oracle")))
    }

    /// Norm of the subgradient returned at `x`.
    pub fn subgradient_norm(&self, x: &[f64]) -> Result<f64> {
        let (_, g) = self.evaluate(x)?;
        Ok(norm(&g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct AbsSum;

    impl Oracle for AbsSum {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            x[0].abs() + x[1].abs()
        }
        fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
            (self.value(x), x.iter().map(|v| if *v > 0.0 { 1.0 } else if *v < 0.0 { -1.0 } else { 0.0 }).collect())
        }
    }

    #[test]
    fn custom_oracle_without_prox() {
        let p = ProblemInstance::custom(Arc::new(AbsSum), Point::zeros(2), 0.0, None, 2.0f64.sqrt()).unwrap();
        assert!(!p.has_prox());
        assert_eq!(p.prox(&[1.0, 1.0], 0.5), Err(Error::Capability("prox oracle")));
        assert_eq!(p.evaluate(&[1.0, -2.0]).unwrap().0, 3.0);
        assert!(matches!(p.evaluate(&[1.0]), Err(Error::Dimension { expected: 2, actual: 1 })));
    }

    #[test]
    fn certificate_validation() {
        assert!(GrowthCertificate::new(0.5, 1.0).is_err());
        assert!(GrowthCertificate::new(1.0, 0.0).is_err());
        assert!(GrowthCertificate::new(2.0, 0.3).is_ok());
    }
}
