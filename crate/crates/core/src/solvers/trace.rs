use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error};
use crate::point::{norm, Point};
use crate::solvers::Cut;

/// Available methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Proximal point method with constant stepsize.
    Prox,
    /// Subgradient method with the Polyak stepsize.
    Polyak,
    /// Proximal bundle method keeping every active cut.
    #[serde(rename = "bundle_mc")]
    BundleMulticut,
    /// Proximal bundle method with cut aggregation.
    #[serde(rename = "bundle_agg")]
    BundleAggregate,
}

impl Method {
    /// All methods.
    pub const ALL: [Method; 4] = [
        Method::Prox,
        Method::Polyak,
        Method::BundleMulticut,
        Method::BundleAggregate,
    ];

    /// Identifier (`prox`, `polyak`, `bundle_mc`, `bundle_agg`).
    pub fn name(self) -> &'static str {
        match self {
            Method::Prox => "prox",
            Method::Polyak => "polyak",
            Method::BundleMulticut => "bundle_mc",
            Method::BundleAggregate => "bundle_agg",
        }
    }

    /// Whether the method is a bundle variant.
    pub fn is_bundle(self) -> bool {
        matches!(self, Method::BundleMulticut | Method::BundleAggregate)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts both `bundle_mc` and `bundle-mc` spellings.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "prox" => Ok(Method::Prox),
            "polyak" => Ok(Method::Polyak),
            "bundle_mc" | "bundle-mc" => Ok(Method::BundleMulticut),
            "bundle_agg" | "bundle-agg" => Ok(Method::BundleAggregate),
            _ => Err(param_err("method", "expected prox, polyak, bundle-mc or bundle-agg")),
        }
    }
}

/// How the iterate of a record was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Starting point.
    Init,
    /// Proximal step.
    Prox,
    /// Subgradient step.
    Subgrad,
    /// Bundle descent step.
    Descent,
    /// Bundle null step; the incumbent did not move.
    Null,
}

impl StepKind {
    /// Lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Init => "init",
            StepKind::Prox => "prox",
            StepKind::Subgrad => "subgrad",
            StepKind::Descent => "descent",
            StepKind::Null => "null",
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `F(x_k) − F* ≤ target_eps`.
    EpsReached,
    /// Bundle model gap fell to `eps_stop`.
    EpsStopTriggered,
    /// Step budget exhausted.
    MaxIter,
}

impl Termination {
    /// Lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            Termination::EpsReached => "eps_reached",
            Termination::EpsStopTriggered => "eps_stop_triggered",
            Termination::MaxIter => "max_iter",
        }
    }
}

/// Bundle-specific data of iteration `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleInfo {
    /// Subproblem solution `z_{k+1}`.
    pub z: Point,
    /// `‖z_{k+1} − x*‖`.
    pub z_dist: f64,
    /// `F̃^k(z_{k+1})`.
    pub model_value: f64,
    /// `F(x_k) − F̃^k(z_{k+1})`.
    pub model_gap: f64,
    /// Cuts defining `F̃^k`. For aggregation: `[newest, aggregate]`, the
    /// aggregate omitted at the first iteration.
    pub model: Vec<Cut>,
    /// Dual weights on `model`.
    pub weights: Vec<f64>,
    /// Aggregation only: `‖∇F̄^{k+1} − ρ(x_k − z_{k+1})‖`.
    pub agg_residual: Option<f64>,
    /// Null steps only: `‖g_{k+1} − ρ(z_{k+1} − x_k)‖²/ρ`.
    pub null_step_m: Option<f64>,
}

/// State after step `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    /// Iteration index.
    pub k: usize,
    /// Step that produced `x_k`.
    pub step_kind: StepKind,
    /// Iterate (incumbent for bundle methods).
    pub x: Point,
    /// `F(x_k)`.
    pub value: f64,
    /// `F(x_k) − F*`.
    pub gap: f64,
    /// `‖x_k − x*‖`.
    pub dist: f64,
    /// Stepsize of the step that produced `x_k`.
    pub stepsize: Option<f64>,
    /// Norm of the subgradient associated with `x_k` (implicit one for prox).
    pub subgrad_norm: f64,
    /// Bundle data.
    pub bundle: Option<BundleInfo>,
}

/// Full run history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    /// Method that produced the trace.
    pub method: Method,
    /// One record per iteration, starting at `k = 0`.
    pub records: Vec<IterRecord>,
    /// Stop reason.
    pub termination: Termination,
}

impl Trace {
    /// Index of the first iterate with gap at most `eps`.
    pub fn first_eps_index(&self, eps: f64) -> Option<usize> {
        self.records.iter().position(|r| r.gap <= eps)
    }

    /// Final record.
    pub fn last(&self) -> &IterRecord {
        self.records.last().expect("traces are never empty")
    }

    /// Number of steps taken.
    pub fn steps(&self) -> usize {
        self.records.len() - 1
    }

    /// Largest `‖x_k − x*‖`.
    pub fn max_dist(&self) -> f64 {
        self.records.iter().map(|r| r.dist).fold(0.0, f64::max)
    }

    /// Largest `‖z_k − x*‖` over all oracle query points, `z_0 = x_0`
    /// included. Equals [`max_dist`](Self::max_dist) for non-bundle methods.
    pub fn max_query_dist(&self) -> f64 {
        let z = self
            .records
            .iter()
            .filter_map(|r| r.bundle.as_ref().map(|b| b.z_dist))
            .fold(0.0, f64::max);
        z.max(self.records[0].dist).max(if self.method.is_bundle() { 0.0 } else { self.max_dist() })
    }

    /// Largest subgradient norm seen, bundle cuts included.
    pub fn max_subgrad_norm(&self) -> f64 {
        let cuts = self
            .records
            .iter()
            .filter_map(|r| r.bundle.as_ref())
            .flat_map(|b| b.model.iter())
            .map(|c| norm(&c.g))
            .fold(0.0, f64::max);
        self.records.iter().map(|r| r.subgrad_norm).fold(cuts, f64::max)
    }
}
