//! Iteration bounds `K(x0, ε, α)` and the two lifting transforms.
//!
//! Bounds are real numbers; compare against iteration counts with `ceil`.
//!
//! ```
//! use growthlift_core::bounds::{BoundKind, BoundParams, RateBound};
//!
//! let params = BoundParams {
//!     gap0: Some(1.0),
//!     rho: Some(0.1),
//!     epsilon: Some(0.1),
//!     d: Some(1.0),
//!     ..Default::default()
//! };
//! let lifted = RateBound::new(BoundKind::ProxSharp).lift_general(1.0).unwrap();
//! assert!((lifted.evaluate(&params).unwrap() - 2000.0).abs() < 1e-9);
//! ```

mod formulas;
mod params;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};
use crate::float::powf;

pub use formulas::{
    k_bundle_general, k_bundle_quadratic, k_bundle_quadratic_full, k_prox_general_halving, k_prox_quad_from_sharp,
    k_prox_quadratic, k_prox_sharp, k_subgrad_quadratic, k_subgrad_sharp,
};
pub use params::BoundParams;

/// Base (unlifted) bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// [`k_prox_quadratic`]
    ProxQuadratic,
    /// [`k_prox_sharp`]
    ProxSharp,
    /// [`k_prox_general_halving`]
    ProxGeneralHalving,
    /// [`k_prox_quad_from_sharp`]
    ProxQuadFromSharp,
    /// [`k_subgrad_quadratic`]
    SubgradQuadratic,
    /// [`k_subgrad_sharp`]
    SubgradSharp,
    /// [`k_bundle_quadratic`]
    BundleQuadratic,
    /// [`k_bundle_general`]
    BundleGeneral,
    /// [`k_bundle_quadratic_full`]
    BundleQuadraticFull,
    /// A bound independent of every parameter.
    Constant(f64),
}

impl BoundKind {
    /// Every named formula.
    pub const NAMED: [BoundKind; 9] = [
        BoundKind::ProxQuadratic,
        BoundKind::ProxSharp,
        BoundKind::ProxGeneralHalving,
        BoundKind::ProxQuadFromSharp,
        BoundKind::SubgradQuadratic,
        BoundKind::SubgradSharp,
        BoundKind::BundleQuadratic,
        BoundKind::BundleGeneral,
        BoundKind::BundleQuadraticFull,
    ];

    /// Identifier such as `k_subgrad_sharp`.
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::ProxQuadratic => "k_prox_quadratic",
            BoundKind::ProxSharp => "k_prox_sharp",
            BoundKind::ProxGeneralHalving => "k_prox_general_halving",
            BoundKind::ProxQuadFromSharp => "k_prox_quad_from_sharp",
            BoundKind::SubgradQuadratic => "k_subgrad_quadratic",
            BoundKind::SubgradSharp => "k_subgrad_sharp",
            BoundKind::BundleQuadratic => "k_bundle_quadratic",
            BoundKind::BundleGeneral => "k_bundle_general",
            BoundKind::BundleQuadraticFull => "k_bundle_quadratic_full",
            BoundKind::Constant(_) => "constant",
        }
    }

    /// Parameters the formula reads.
    pub fn required_fields(self) -> &'static [&'static str] {
        match self {
            BoundKind::ProxQuadratic | BoundKind::ProxQuadFromSharp => &["alpha", "rho", "epsilon", "gap0"],
            BoundKind::ProxSharp => &["alpha", "rho", "gap0"],
            BoundKind::ProxGeneralHalving => &["dist0", "rho", "epsilon"],
            BoundKind::SubgradQuadratic | BoundKind::SubgradSharp => &["L", "alpha", "epsilon", "dist0"],
            BoundKind::BundleQuadratic | BoundKind::BundleQuadraticFull => {
                &["L", "alpha", "rho", "beta", "epsilon", "gap0"]
            }
            BoundKind::BundleGeneral => &["L", "D", "rho", "beta", "epsilon", "gap0"],
            BoundKind::Constant(_) => &[],
        }
    }

    /// Evaluates the formula.
    pub fn evaluate(self, params: &BoundParams) -> Result<f64> {
        match self {
            BoundKind::ProxQuadratic => k_prox_quadratic(params),
            BoundKind::ProxSharp => k_prox_sharp(params),
            BoundKind::ProxGeneralHalving => k_prox_general_halving(params),
            BoundKind::ProxQuadFromSharp => k_prox_quad_from_sharp(params),
            BoundKind::SubgradQuadratic => k_subgrad_quadratic(params),
            BoundKind::SubgradSharp => k_subgrad_sharp(params),
            BoundKind::BundleQuadratic => k_bundle_quadratic(params),
            BoundKind::BundleGeneral => k_bundle_general(params),
            BoundKind::BundleQuadraticFull => k_bundle_quadratic_full(params),
            BoundKind::Constant(v) => Ok(v),
        }
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::NAMED
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| param_err("name", format!("unknown bound `{s}`")))
    }
}

/// Substitution applied to `α` before evaluating an inner bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    /// `α ↦ ε/Dᵖ`.
    General {
        /// Growth exponent of the inner bound.
        p: f64,
    },
    /// `α ↦ α^{p/q} ε^{1−p/q}`, turning a bound for exponent `p` into one
    /// for exponent `q > p`.
    Higher {
        /// Growth exponent of the inner bound.
        p: f64,
        /// Growth exponent actually assumed.
        q: f64,
    },
}

impl Lift {
    fn apply(self, params: &BoundParams) -> Result<BoundParams> {
        let eps = params.get("epsilon")?;
        let alpha = match self {
            Lift::General { p } => eps / powf(params.get("D")?, p),
            Lift::Higher { p, q } => {
                let r = p / q;
                powf(params.get("alpha")?, r) * powf(eps, 1.0 - r)
            }
        };
        Ok(BoundParams {
            alpha: Some(alpha),
            ..*params
        })
    }
}

impl fmt::Display for Lift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lift::General { p } => write!(f, "general:{p}"),
            Lift::Higher { p, q } => write!(f, "higher:{p},{q}"),
        }
    }
}

impl FromStr for Lift {
    type Err = Error;

    /// Parses `general:p` or `higher:p,q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || param_err("lift", "expected `general:p` or `higher:p,q`");
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "general" => Ok(Lift::General { p: num(rest)? }),
            "higher" => {
                let (p, q) = rest.split_once(',').ok_or_else(bad)?;
                Ok(Lift::Higher { p: num(p)?, q: num(q)? })
            }
            _ => Err(bad()),
        }
    }
}

/// A base formula wrapped in zero or more lifts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    base: BoundKind,
    /// Innermost first.
    lifts: Vec<Lift>,
}

impl From<BoundKind> for RateBound {
    fn from(base: BoundKind) -> Self {
        Self::new(base)
    }
}

impl RateBound {
    /// Unlifted bound.
    pub fn new(base: BoundKind) -> Self {
        Self {
            base,
            lifts: Vec::new(),
        }
    }

    /// Base formula.
    pub fn base(&self) -> BoundKind {
        self.base
    }

    /// Lifts, innermost first.
    pub fn lifts(&self) -> &[Lift] {
        &self.lifts
    }

    /// Name such as `k_prox_sharp` or `k_prox_sharp+general:1`.
    pub fn name(&self) -> String {
        let mut name = String::from(self.base.name());
        for lift in &self.lifts {
            name.push_str(&format!("+{lift}"));
        }
        name
    }

    /// Parameters read by [`evaluate`](Self::evaluate).
    pub fn required_fields(&self) -> Vec<&'static str> {
        let mut fields: Vec<&'static str> = self.base.required_fields().to_vec();
        for lift in &self.lifts {
            // the lift supplies α and reads its own inputs
            fields.retain(|f| *f != "alpha");
            let extra: &[&'static str] = match lift {
                Lift::General { .. } => &["epsilon", "D"],
                Lift::Higher { .. } => &["epsilon", "alpha"],
            };
            for f in extra {
                if !fields.contains(f) {
                    fields.push(f);
                }
            }
        }
        fields
    }

    /// `K(x0, ε, ε/Dᵖ)`: valid without any growth assumption for methods
    /// whose iterates stay within `D` of `x*`.
    pub fn lift_general(mut self, p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(param_err("p", "must be at least 1"));
        }
        self.lifts.push(Lift::General { p });
        Ok(self)
    }

    /// `K(x0, ε, α^{p/q} ε^{1−p/q})`: valid under growth of exponent `q`.
    pub fn lift_higher(mut self, p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(param_err("p", "must be at least 1"));
        }
        if !(q > p && q.is_finite()) {
            return Err(param_err("q", "must exceed p"));
        }
        self.lifts.push(Lift::Higher { p, q });
        Ok(self)
    }

    /// Applies `lift` as the new outermost transform.
    pub fn lift(self, lift: Lift) -> Result<Self> {
        match lift {
            Lift::General { p } => self.lift_general(p),
            Lift::Higher { p, q } => self.lift_higher(p, q),
        }
    }

    /// Evaluates the bound; the outermost lift substitutes first.
    pub fn evaluate(&self, params: &BoundParams) -> Result<f64> {
        let mut params = *params;
        for lift in self.lifts.iter().rev() {
            params = lift.apply(&params)?;
        }
        self.base.evaluate(&params)
    }
}

/// [`RateBound::lift_general`] as a free function.
pub fn lift_general_bound(base: RateBound, p: f64) -> Result<RateBound> {
    base.lift_general(p)
}

/// [`RateBound::lift_higher`] as a free function.
pub fn lift_higher_bound(base: RateBound, p: f64, q: f64) -> Result<RateBound> {
    base.lift_higher(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn spec_values() {
        let p = BoundParams {
            alpha: Some(2.0),
            rho: Some(1.0),
            gap0: Some(1.0),
            epsilon: Some(1e-3),
            ..Default::default()
        };
        assert!(rel(k_prox_quadratic(&p).unwrap(), 1000f64.ln() / 2f64.ln()) < 1e-15);
        let p = BoundParams {
            gap0: Some(1.0),
            rho: Some(0.1),
            alpha: Some(1.0),
            ..Default::default()
        };
        assert!(rel(k_prox_sharp(&p).unwrap(), 20.0) < 1e-15);
        let p = BoundParams {
            dist0: Some(1.0),
            rho: Some(1.0),
            epsilon: Some(0.1),
            ..Default::default()
        };
        assert!(rel(k_prox_general_halving(&p).unwrap(), 160.0) < 1e-15);
        let p = BoundParams {
            lipschitz: Some(1.0),
            alpha: Some(1.0),
            dist0: Some(1.0),
            epsilon: Some(1e-3),
            ..Default::default()
        };
        assert!(rel(k_subgrad_quadratic(&p).unwrap(), 2000.0 * 1000f64.ln()) < 1e-14);
        assert!(rel(k_subgrad_sharp(&p).unwrap(), 2.0 * 1000f64.ln()) < 1e-14);
    }

    #[test]
    fn degenerate_logs_clamp_to_zero() {
        let p = BoundParams {
            alpha: Some(2.0),
            rho: Some(1.0),
            gap0: Some(1e-3),
            epsilon: Some(1e-3),
            lipschitz: Some(1.0),
            dist0: Some(1e-3),
            ..Default::default()
        };
        assert_eq!(k_prox_quadratic(&p).unwrap(), 0.0);
        assert_eq!(k_subgrad_sharp(&p).unwrap(), 0.0);
        assert_eq!(k_prox_sharp(&BoundParams { gap0: Some(0.0), ..p }).unwrap(), 0.0);
    }

    #[test]
    fn bundle_terms_by_hand() {
        let p = BoundParams {
            lipschitz: Some(1.0),
            rho: Some(1.0),
            beta: Some(0.5),
            alpha: Some(1.0),
            gap0: Some(1.0),
            epsilon: Some(1e-2),
            ..Default::default()
        };
        // ᾱ = 1, ε_s = 0.01, A = 8/(0.25·0.01) = 3200
        let a = 3200.0;
        let t1 = a * (1.0f64 / 0.02).ln();
        let t2 = (1.0f64 / 0.005).ln() * (a / 0.5 * (9.0f64 / 0.5).ln() + 4.0);
        assert!(rel(k_bundle_quadratic(&p).unwrap(), t1 + t2 + 2.0) < 1e-13);
    }

    #[test]
    fn alpha_bar_is_relative_to_rho() {
        let p = |alpha, rho| BoundParams {
            alpha: Some(alpha),
            rho: Some(rho),
            ..Default::default()
        };
        assert_eq!(p(3.0, 2.0).alpha_bar().unwrap(), 1.0);
        assert_eq!(p(1.0, 2.0).alpha_bar().unwrap(), 0.5);
    }

    #[test]
    fn lifts_compose_outermost_first() {
        let p = BoundParams {
            gap0: Some(1.0),
            rho: Some(0.1),
            epsilon: Some(0.1),
            d: Some(1.0),
            alpha: Some(7.0),
            ..Default::default()
        };
        let b = RateBound::new(BoundKind::ProxSharp).lift_general(1.0).unwrap();
        assert!(rel(b.evaluate(&p).unwrap(), 2000.0) < 1e-12);
        assert_eq!(b.name(), "k_prox_sharp+general:1");
        assert!(!b.required_fields().contains(&"alpha"));
        // general(2) then higher(1,2) on top: α = (ε/D²)^{1/2} ε^{1/2} = ε/D
        let both = RateBound::new(BoundKind::ProxSharp)
            .lift_higher(1.0, 2.0)
            .unwrap()
            .lift_general(2.0)
            .unwrap();
        assert!(rel(both.evaluate(&p).unwrap(), 2000.0) < 1e-12);
    }

    #[test]
    fn constant_is_invariant_under_lifts() {
        let b = RateBound::new(BoundKind::Constant(5.0)).lift_general(1.0).unwrap();
        let p = BoundParams {
            epsilon: Some(0.1),
            d: Some(3.0),
            ..Default::default()
        };
        assert_eq!(b.evaluate(&p).unwrap(), 5.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            k_prox_sharp(&BoundParams::default()),
            Err(Error::MissingParam("alpha"))
        ));
        assert!("k_nope".parse::<BoundKind>().is_err());
        assert!(RateBound::new(BoundKind::ProxSharp).lift_higher(2.0, 1.0).is_err());
        assert_eq!("higher:1,2".parse::<Lift>().unwrap(), Lift::Higher { p: 1.0, q: 2.0 });
        let beta = BoundParams {
            beta: Some(1.0),
            ..Default::default()
        };
        assert!(matches!(beta.get("beta"), Err(Error::Parameter { field: "beta", .. })));
    }
}
