//! Experiment runner with runtime checks.
//!
//! [`run`] executes one method on one problem and evaluates the requested
//! [`CheckName`]s on the trace. [`check_equivalence`] and
//! [`check_higher_equivalence`] run a method on `F` and on its lifted
//! counterpart `G` and compare the traces.

mod checks;
mod equivalence;

use growthlift_core::bounds::{BoundKind, BoundParams, RateBound};
use growthlift_core::problems::{GrowthCertificate, ProblemInstance, ProblemSpec};
use growthlift_core::solvers::{self, Method, SolverConfig, Trace};
use growthlift_core::Point;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use checks::{
    check_aggregation, check_bound, check_distance, check_incumbent_monotone, check_model_lower_bound,
    check_polyak_recurrence, check_prox_descent, check_prox_optimality,
};
pub use equivalence::{check_equivalence, check_higher_equivalence, EquivalenceReport};

/// Named runtime checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    /// `(x_k − x_{k+1})/ρ ∈ ∂F(x_{k+1})`, probed at sample points.
    ProxOptimality,
    /// `F(x_{k+1}) ≤ F(x_k) − ‖x_{k+1} − x_k‖²/(2ρ)`.
    ProxDescent,
    /// Iterates stay in the ball predicted by the method's distance bound.
    Distance,
    /// `‖x_{k+1} − x*‖² ≤ ‖x_k − x*‖² − gap_k²/L²`.
    PolyakRecurrence,
    /// Iterations to each target never exceed the matching bound.
    Bound,
    /// Cutting-plane models minorize `F`.
    ModelLowerBound,
    /// Bundle incumbent values never increase.
    IncumbentMonotone,
    /// Aggregate gradient equals `ρ(x_k − z_{k+1})`.
    AggregationIdentity,
}

impl CheckName {
    /// Checks meaningful for `method`.
    pub fn defaults(method: Method) -> Vec<CheckName> {
        use CheckName::*;
        match method {
            Method::Prox => vec![ProxOptimality, ProxDescent, Distance, Bound],
            Method::Polyak => vec![PolyakRecurrence, Distance, Bound],
            Method::BundleMulticut => vec![Distance, ModelLowerBound, IncumbentMonotone, Bound],
            Method::BundleAggregate => vec![Distance, ModelLowerBound, IncumbentMonotone, AggregationIdentity, Bound],
        }
    }

    /// Snake-case name.
    pub fn name(self) -> &'static str {
        match self {
            CheckName::ProxOptimality => "prox_optimality",
            CheckName::ProxDescent => "prox_descent",
            CheckName::Distance => "distance",
            CheckName::PolyakRecurrence => "polyak_recurrence",
            CheckName::Bound => "bound",
            CheckName::ModelLowerBound => "model_lower_bound",
            CheckName::IncumbentMonotone => "incumbent_monotone",
            CheckName::AggregationIdentity => "aggregation_identity",
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Check name.
    pub name: String,
    /// Whether every residual is within tolerance.
    pub passed: bool,
    /// Largest residual; positive values are violations of the inequality.
    pub worst_residual: f64,
    /// Iteration index of the worst residual.
    pub location: Option<usize>,
    /// Residuals up to this value pass.
    pub tolerance: f64,
    /// Human readable summary.
    pub detail: String,
}

impl CheckReport {
    pub(crate) fn from_residuals(
        name: impl Into<String>,
        tolerance: f64,
        residuals: impl IntoIterator<Item = (usize, f64)>,
    ) -> Self {
        let mut worst = f64::NEG_INFINITY;
        let mut location = None;
        let mut count = 0;
        for (k, r) in residuals {
            count += 1;
            // NaN residuals count as failures
            if r > worst || r.is_nan() {
                worst = r;
                location = Some(k);
                if r.is_nan() {
                    break;
                }
            }
        }
        let passed = count == 0 || worst <= tolerance;
        let name = name.into();
        let detail = match location {
            Some(k) => format!("{count} residuals, worst {worst:e} at k={k} (tolerance {tolerance:e})"),
            None => "nothing to check".to_string(),
        };
        Self {
            name,
            passed,
            worst_residual: if count == 0 { 0.0 } else { worst },
            location,
            tolerance,
            detail,
        }
    }
}

/// Serializable description of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Problem to solve.
    pub problem: ProblemSpec,
    /// Method.
    pub method: Method,
    /// Solver parameters; `target_eps` is replaced by the smallest target.
    #[serde(default)]
    pub config: SolverConfig,
    /// Starting point.
    pub x0: Vec<f64>,
    /// Strictly decreasing accuracy targets.
    pub eps_list: Vec<f64>,
    /// Checks to evaluate; the method defaults when empty.
    #[serde(default)]
    pub checks: Vec<CheckName>,
}

/// Trace plus check reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    /// Full trace, truncated at the smallest target.
    pub trace: Trace,
    /// One report per requested check.
    pub reports: Vec<CheckReport>,
}

impl RunOutcome {
    /// Whether every check passed.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

/// Builds the problem from `spec` and calls [`run_instance`].
pub fn run(spec: &ExperimentSpec, default_seed: u64) -> Result<RunOutcome> {
    let problem = spec.problem.build(default_seed)?;
    let x0 = Point::new(spec.x0.clone())?;
    run_instance(&problem, spec.method, &spec.config, &x0, &spec.eps_list, &spec.checks)
}

/// Runs `method` until the smallest target in `eps_list` (or the iteration
/// budget) and evaluates `checks`.
pub fn run_instance(
    problem: &ProblemInstance,
    method: Method,
    config: &SolverConfig,
    x0: &Point,
    eps_list: &[f64],
    checks: &[CheckName],
) -> Result<RunOutcome> {
    if eps_list.is_empty() {
        return Err(invalid("eps_list", "at least one target is required"));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(invalid("eps_list", "targets must be positive"));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("eps_list", "targets must be strictly decreasing"));
    }
    let config = SolverConfig {
        target_eps: *eps_list.last().expect("nonempty"),
        ..*config
    };
    let trace = solvers::run(method, problem, &config, x0)?;
    let checks = if checks.is_empty() {
        CheckName::defaults(method)
    } else {
        checks.to_vec()
    };
    let mut reports = Vec::with_capacity(checks.len());
    for check in checks {
        let report = match check {
            CheckName::ProxOptimality => check_prox_optimality(problem, &trace, config.rho),
            CheckName::ProxDescent => check_prox_descent(&trace, config.rho),
            CheckName::Distance => check_distance(&trace, config.rho, config.beta),
            CheckName::PolyakRecurrence => check_polyak_recurrence(&trace, trace.max_subgrad_norm()),
            CheckName::ModelLowerBound => check_model_lower_bound(problem, &trace, 1000, 0),
            CheckName::IncumbentMonotone => check_incumbent_monotone(&trace),
            CheckName::AggregationIdentity => check_aggregation(&trace),
            CheckName::Bound => match matching_bound(method, problem.growth()) {
                Some(bound) => check_bound(&trace, &bound, &bound_params(&trace, problem, &config), eps_list),
                None => CheckReport {
                    name: "bound".into(),
                    passed: true,
                    worst_residual: 0.0,
                    location: None,
                    tolerance: 0.0,
                    detail: "no growth certificate; skipped".into(),
                },
            },
        };
        reports.push(report);
    }
    Ok(RunOutcome { trace, reports })
}

/// The bound that applies to `method` under growth `cert`.
///
/// Exponent 1 uses the sharp bounds and exponent 2 the quadratic ones. Other
/// exponents lift the nearest lower one. Bundle methods have no sharp bound,
/// so exponents below 2 use the general bundle bound, which needs `D`.
pub fn matching_bound(method: Method, cert: Option<GrowthCertificate>) -> Option<RateBound> {
    let p = cert?.exponent;
    let (sharp, quadratic) = match method {
        Method::Prox => (Some(BoundKind::ProxSharp), BoundKind::ProxQuadratic),
        Method::Polyak => (Some(BoundKind::SubgradSharp), BoundKind::SubgradQuadratic),
        Method::BundleMulticut | Method::BundleAggregate => (None, BoundKind::BundleQuadratic),
    };
    if p == 2.0 {
        return Some(RateBound::new(quadratic));
    }
    if p > 2.0 {
        return RateBound::new(quadratic).lift_higher(2.0, p).ok();
    }
    match sharp {
        Some(s) if p == 1.0 => Some(RateBound::new(s)),
        Some(s) => RateBound::new(s).lift_higher(1.0, p).ok(),
        None => Some(RateBound::new(BoundKind::BundleGeneral)),
    }
}

/// Bound parameters measured from a trace: `L` is the largest subgradient
/// norm seen and `D` the largest distance of any oracle query point to `x*`.
pub fn bound_params(trace: &Trace, problem: &ProblemInstance, config: &SolverConfig) -> BoundParams {
    let first = &trace.records[0];
    BoundParams {
        dist0: Some(first.dist),
        gap0: Some(first.gap),
        rho: Some(config.rho),
        beta: Some(config.beta),
        lipschitz: Some(trace.max_subgrad_norm()).filter(|l| *l > 0.0),
        alpha: problem.growth().map(|c| c.coefficient),
        d: Some(trace.max_query_dist()).filter(|d| *d > 0.0),
        ..Default::default()
    }
}
