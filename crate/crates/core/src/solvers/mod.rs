//! Proximal point, Polyak subgradient and proximal bundle methods.
//!
//! Every method records a full [`Trace`]. Runs are deterministic: identical
//! inputs give bitwise identical traces.

mod bundle;
mod config;
mod polyak;
mod prox;
mod subproblem;
mod trace;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::{distance, Point};
use crate::problems::ProblemInstance;

pub use bundle::{bundle_aggregate, bundle_multicut};
pub use config::SolverConfig;
pub use polyak::subgradient_polyak;
pub use prox::proximal_point;
pub use subproblem::{
    solve_multicut_projected_gradient, solve_multicut_subproblem, solve_two_cut_subproblem, Cut,
    SubproblemSolution, TwoCutSolution,
};
pub use trace::{BundleInfo, IterRecord, Method, StepKind, Termination, Trace};

/// Runs `method` on `problem` from `x0`.
pub fn run(method: Method, problem: &ProblemInstance, config: &SolverConfig, x0: &Point) -> Result<Trace> {
    match method {
        Method::Prox => proximal_point(problem, config, x0),
        Method::Polyak => subgradient_polyak(problem, config, x0),
        Method::BundleMulticut => bundle_multicut(problem, config, x0),
        Method::BundleAggregate => bundle_aggregate(problem, config, x0),
    }
}

fn check_start(problem: &ProblemInstance, config: &SolverConfig, x0: &Point) -> Result<()> {
    config.validate()?;
    if x0.dim() != problem.dim() {
        return Err(Error::Dimension {
            expected: problem.dim(),
            actual: x0.dim(),
        });
    }
    Ok(())
}

fn record(
    problem: &ProblemInstance,
    k: usize,
    step_kind: StepKind,
    x: Vec<f64>,
    value: f64,
    stepsize: Option<f64>,
    subgrad_norm: f64,
) -> IterRecord {
    IterRecord {
        k,
        step_kind,
        dist: distance(&x, problem.minimizer()),
        x: Point::from_vec_unchecked(x),
        value,
        gap: value - problem.min_value(),
        stepsize,
        subgrad_norm,
        bundle: None,
    }
}
