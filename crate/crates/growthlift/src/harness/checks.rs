use growthlift_core::bounds::{BoundParams, RateBound};
use growthlift_core::problems::ProblemInstance;
use growthlift_core::solvers::Trace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CheckReport;

const PROX_OPTIMALITY_TOL: f64 = 1e-8;
const DESCENT_TOL: f64 = 1e-9;
const DISTANCE_TOL: f64 = 1e-9;
const BUNDLE_DISTANCE_TOL: f64 = 1e-6;
const RECURRENCE_TOL: f64 = 1e-9;
const MODEL_TOL: f64 = 1e-10;
const AGGREGATION_TOL: f64 = 1e-10;
const PROBE_SCALES: [f64; 3] = [1e-3, 1e-1, 1.0];

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    v.into_iter().map(|x| x / norm).collect()
}

/// Probes the subgradient inequality of `(x_k − x_{k+1})/ρ` at `x_{k+1}`
/// along seeded random directions.
pub fn check_prox_optimality(problem: &ProblemInstance, trace: &Trace, rho: f64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
    let mut residuals = Vec::new();
    for w in trace.records.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        let v: Vec<f64> = prev.x.iter().zip(next.x.iter()).map(|(a, b)| (a - b) / rho).collect();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..4 {
            let u = direction(&mut rng, v.len());
            for s in PROBE_SCALES {
                let y: Vec<f64> = next.x.iter().zip(&u).map(|(x, u)| x + s * u).collect();
                let lin = next.value + s * v.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
                let fy = problem.value(&y).expect("dimension matches");
                worst = worst.max(lin - fy);
            }
        }
        residuals.push((next.k, worst));
    }
    CheckReport::from_residuals("prox_optimality", PROX_OPTIMALITY_TOL, residuals)
}

/// `F(x_{k+1}) − F(x_k) + ‖x_{k+1} − x_k‖²/(2ρ) ≤ 1e-9`.
pub fn check_prox_descent(trace: &Trace, rho: f64) -> CheckReport {
    let residuals = trace.records.windows(2).map(|w| {
        let step = dist(&w[0].x, &w[1].x);
        (w[1].k, w[1].value - w[0].value + step * step / (2.0 * rho))
    });
    CheckReport::from_residuals("prox_descent", DESCENT_TOL, residuals)
}

/// Prox and Polyak: `‖x_k − x*‖ ≤ ‖x0 − x*‖ + 1e-9`. Bundle:
/// `‖z_k − x*‖² ≤ 2(1 + (1−β)/β)(‖x0 − x*‖² + L²/ρ²) + 1e-6` with `L` the
/// largest subgradient norm in the trace.
pub fn check_distance(trace: &Trace, rho: f64, beta: f64) -> CheckReport {
    let d0 = trace.records[0].dist;
    if trace.method.is_bundle() {
        let l = trace.max_subgrad_norm();
        let bound = 2.0 * (1.0 + (1.0 - beta) / beta) * (d0 * d0 + l * l / (rho * rho));
        let residuals = trace.records.iter().filter_map(|r| {
            let b = r.bundle.as_ref()?;
            Some((r.k + 1, b.z_dist * b.z_dist - bound))
        });
        CheckReport::from_residuals("distance", BUNDLE_DISTANCE_TOL, residuals)
    } else {
        let residuals = trace.records.iter().map(|r| (r.k, r.dist - d0));
        CheckReport::from_residuals("distance", DISTANCE_TOL, residuals)
    }
}

/// `‖x_{k+1} − x*‖² − ‖x_k − x*‖² + gap_k²/L² ≤ 1e-9`.
pub fn check_polyak_recurrence(trace: &Trace, lipschitz: f64) -> CheckReport {
    let residuals = trace.records.windows(2).map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (a.k, b.dist * b.dist - a.dist * a.dist + a.gap * a.gap / (lipschitz * lipschitz))
    });
    CheckReport::from_residuals("polyak_recurrence", RECURRENCE_TOL, residuals)
}

/// For each target, the first index with gap at most the target minus the
/// ceiling of the bound; positive means the bound was exceeded. A run that
/// never reaches a target fails with an infinite residual.
pub fn check_bound(trace: &Trace, bound: &RateBound, params: &BoundParams, eps_list: &[f64]) -> CheckReport {
    let name = format!("bound[{}]", bound.name());
    let mut residuals = Vec::new();
    let mut notes = Vec::new();
    for &eps in eps_list {
        let Some(observed) = trace.first_eps_index(eps) else {
            notes.push(format!("ε={eps:e}: not reached"));
            residuals.push((trace.steps(), f64::INFINITY));
            continue;
        };
        if observed == 0 {
            notes.push(format!("ε={eps:e}: 0 ≤ 0"));
            residuals.push((0, 0.0));
            continue;
        }
        let p = BoundParams {
            epsilon: Some(eps),
            ..*params
        };
        match bound.evaluate(&p) {
            Ok(k) => {
                notes.push(format!("ε={eps:e}: {observed} ≤ {}", k.ceil()));
                residuals.push((observed, observed as f64 - k.ceil()));
            }
            Err(e) => {
                notes.push(format!("ε={eps:e}: {e}"));
                residuals.push((observed, f64::NAN));
            }
        }
    }
    let mut report = CheckReport::from_residuals(name, 0.0, residuals);
    report.detail = notes.join("; ");
    report
}

/// Samples `total` points spread over the bundle records around each
/// incumbent and checks `F̃^k(y) ≤ F(y) + 1e-10`.
pub fn check_model_lower_bound(problem: &ProblemInstance, trace: &Trace, total: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records: Vec<_> = trace.records.iter().filter(|r| r.bundle.is_some()).collect();
    if records.is_empty() {
        return CheckReport::from_residuals("model_lower_bound", MODEL_TOL, std::iter::empty());
    }
    let scale = trace.records[0].dist.max(1.0);
    let mut residuals = Vec::with_capacity(total);
    for i in 0..total {
        let r = records[i * records.len() / total];
        let b = r.bundle.as_ref().expect("filtered");
        let u = direction(&mut rng, r.x.len());
        let s = scale * rng.gen_range(0.0..2.0f64).powi(3);
        let y: Vec<f64> = r.x.iter().zip(&u).map(|(x, u)| x + s * u).collect();
        let model = b.model.iter().map(|c| c.eval(&y)).fold(f64::NEG_INFINITY, f64::max);
        let fy = problem.value(&y).expect("dimension matches");
        residuals.push((r.k, model - fy));
    }
    CheckReport::from_residuals("model_lower_bound", MODEL_TOL, residuals)
}

/// `F(x_{k+1}) − F(x_k) ≤ 0` for bundle incumbents.
pub fn check_incumbent_monotone(trace: &Trace) -> CheckReport {
    let residuals = trace.records.windows(2).map(|w| (w[1].k, w[1].value - w[0].value));
    CheckReport::from_residuals("incumbent_monotone", 0.0, residuals)
}

/// `‖∇F̄^{k+1} − ρ(x_k − z_{k+1})‖ ≤ 1e-10` at every aggregation step.
pub fn check_aggregation(trace: &Trace) -> CheckReport {
    let residuals = trace
        .records
        .iter()
        .filter_map(|r| Some((r.k, r.bundle.as_ref()?.agg_residual?)));
    CheckReport::from_residuals("aggregation_identity", AGGREGATION_TOL, residuals)
}
