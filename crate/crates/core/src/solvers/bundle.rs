use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::point::{distance, norm, norm_sq, Point};
use crate::problems::ProblemInstance;

use super::subproblem::combine_gradients;
use super::{
    check_start, record, solve_multicut_subproblem, solve_two_cut_subproblem, BundleInfo, Cut, Method,
    SolverConfig, StepKind, Termination, Trace,
};

/// Cuts whose dual weight does not exceed this are dropped.
const RETAIN_WEIGHT: f64 = 1e-12;

/// Proximal bundle method keeping every cut with positive dual weight plus
/// the newest one.
///
/// Each iteration solves `min F̃^k(x) + (ρ/2)‖x − x_k‖²` for `z_{k+1}`, stops
/// when the model gap `F(x_k) − F̃^k(z_{k+1})` is at most `eps_stop` or the
/// true gap is at most `target_eps`, and otherwise moves the incumbent to
/// `z_{k+1}` iff `F(z_{k+1}) ≤ F(x_k) − β·(model gap)`.
pub fn bundle_multicut(problem: &ProblemInstance, config: &SolverConfig, x0: &Point) -> Result<Trace> {
    run_bundle(problem, config, x0, Method::BundleMulticut)
}

/// Proximal bundle method whose model is the maximum of the newest cut and
/// one aggregate plane `F̄^{k+1} = θ_k F̄^k + (1 − θ_k) ℓ_k`, where `θ_k` is
/// the optimal dual weight of the aggregate in the two-cut subproblem.
///
/// The first model has no aggregate (`F̄⁰ = −∞`), so `θ_0 = 0`.
pub fn bundle_aggregate(problem: &ProblemInstance, config: &SolverConfig, x0: &Point) -> Result<Trace> {
    run_bundle(problem, config, x0, Method::BundleAggregate)
}

enum Model {
    Multi(Vec<Cut>),
    Aggregate { newest: Cut, agg: Option<Cut> },
}

struct Solved {
    z: Vec<f64>,
    model_value: f64,
    cuts: Vec<Cut>,
    weights: Vec<f64>,
    theta: f64,
    agg_residual: Option<f64>,
}

impl Model {
    fn solve(&self, x: &[f64], rho: f64) -> Result<Solved> {
        match self {
            Model::Multi(cuts) => {
                let sol = solve_multicut_subproblem(cuts, x, rho)?;
                Ok(Solved {
                    z: sol.z.into_vec(),
                    model_value: sol.model_value,
                    cuts: cuts.clone(),
                    weights: sol.lambda,
                    theta: 0.0,
                    agg_residual: None,
                })
            }
            Model::Aggregate { newest, agg } => {
                let sol = solve_two_cut_subproblem(newest, agg.as_ref(), x, rho)?;
                let combined = match agg {
                    Some(a) => combine_gradients(sol.theta, &a.g, &newest.g),
                    None => newest.g.to_vec(),
                };
                let resid: Vec<f64> = combined
                    .iter()
                    .zip(x.iter().zip(sol.z.iter()))
                    .map(|(g, (x, z))| g - rho * (x - z))
                    .collect();
                let mut cuts = vec![newest.clone()];
                let mut weights = vec![1.0 - sol.theta];
                if let Some(a) = agg {
                    cuts.push(a.clone());
                    weights.push(sol.theta);
                }
                Ok(Solved {
                    z: sol.z.into_vec(),
                    model_value: sol.model_value,
                    cuts,
                    weights,
                    theta: sol.theta,
                    agg_residual: Some(norm(&resid)),
                })
            }
        }
    }

    fn update(&mut self, solved: &Solved, cut: Cut, x: &[f64]) {
        match self {
            Model::Multi(cuts) => {
                let mut kept: Vec<Cut> = cuts
                    .drain(..)
                    .zip(&solved.weights)
                    .filter(|(_, w)| **w > RETAIN_WEIGHT)
                    .map(|(c, _)| c)
                    .collect();
                kept.push(cut);
                *cuts = kept;
            }
            Model::Aggregate { newest, agg } => {
                let next = match agg.as_ref() {
                    Some(a) => Cut::combine(solved.theta, a, newest, x),
                    None => Cut::combine(0.0, newest, newest, x),
                };
                *agg = Some(next);
                *newest = cut;
            }
        }
    }
}

fn run_bundle(problem: &ProblemInstance, config: &SolverConfig, x0: &Point, method: Method) -> Result<Trace> {
    check_start(problem, config, x0)?;
    let rho = config.rho;
    let (f0, g0) = problem.eval_raw(x0);
    let first = Cut::new_unchecked(x0.to_vec(), f0, g0.clone());
    let mut model = match method {
        Method::BundleAggregate => Model::Aggregate {
            newest: first,
            agg: None,
        },
        _ => Model::Multi(vec![first]),
    };
    let mut x = x0.to_vec();
    let mut fx = f0;
    let mut gx_norm = norm(&g0);
    let mut kind = StepKind::Init;
    let mut stepsize = None;
    let mut records = Vec::new();
    let mut k = 0;
    let termination = loop {
        let solved = model.solve(&x, rho)?;
        let model_gap = fx - solved.model_value;
        let mut rec = record(problem, k, kind, x.clone(), fx, stepsize, gx_norm);
        rec.bundle = Some(BundleInfo {
            z: Point::from_vec_unchecked(solved.z.clone()),
            z_dist: distance(&solved.z, problem.minimizer()),
            model_value: solved.model_value,
            model_gap,
            model: solved.cuts.clone(),
            weights: solved.weights.clone(),
            agg_residual: solved.agg_residual,
            null_step_m: None,
        });
        let gap = rec.gap;
        records.push(rec);
        if model_gap <= config.eps_stop {
            break Termination::EpsStopTriggered;
        }
        if gap <= config.target_eps {
            break Termination::EpsReached;
        }
        if k == config.max_iter {
            break Termination::MaxIter;
        }

        let z = solved.z.clone();
        let (fz, gz) = problem.eval_raw(&z);
        let descent = fz <= fx - config.beta * model_gap;
        if !descent {
            let shifted: Vec<f64> = gz
                .iter()
                .zip(z.iter().zip(&x))
                .map(|(g, (z, x))| g - rho * (z - x))
                .collect();
            if let Some(b) = records.last_mut().and_then(|r| r.bundle.as_mut()) {
                b.null_step_m = Some(norm_sq(&shifted) / rho);
            }
        }
        let gz_norm = norm(&gz);
        model.update(&solved, Cut::new_unchecked(z.clone(), fz, gz), &x);
        if descent {
            x = z;
            fx = fz;
            gx_norm = gz_norm;
            kind = StepKind::Descent;
        } else {
            kind = StepKind::Null;
        }
        stepsize = Some(1.0 / rho);
        k += 1;
    };
    Ok(Trace {
        method,
        records,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_builtin, ProblemKind, ProblemParams};

    fn abs_problem() -> ProblemInstance {
        let params = ProblemParams {
            alpha: Some(1.0),
            ..Default::default()
        };
        make_builtin(ProblemKind::SharpNorm, 1, &params, 0).unwrap()
    }

    fn config() -> SolverConfig {
        SolverConfig {
            rho: 1.0,
            beta: 0.5,
            eps_stop: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn abs_hand_simulation() {
        for method in [Method::BundleMulticut, Method::BundleAggregate] {
            let t = super::super::run(method, &abs_problem(), &config(), &Point::new(vec![1.0]).unwrap()).unwrap();
            assert_eq!(t.records.len(), 2, "{method}");
            let b0 = t.records[0].bundle.as_ref().unwrap();
            assert_eq!(b0.z[0], 0.0);
            assert_eq!(b0.model_gap, 1.0);
            assert_eq!(t.records[1].step_kind, StepKind::Descent);
            assert_eq!(t.records[1].x[0], 0.0);
            assert_eq!(t.records[1].bundle.as_ref().unwrap().model_gap, 0.0);
            assert_eq!(t.termination, Termination::EpsStopTriggered);
        }
    }

    #[test]
    fn start_at_minimizer_stops() {
        let t = bundle_multicut(&abs_problem(), &config(), &Point::zeros(1)).unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.records[0].bundle.as_ref().unwrap().model_gap, 0.0);
    }

    #[test]
    fn max_affine_incumbents_descend() {
        let params = ProblemParams::default();
        let p = make_builtin(ProblemKind::MaxAffine, 2, &params, 7).unwrap();
        let x0 = Point::new(vec![2.0, -1.5]).unwrap();
        for method in [Method::BundleMulticut, Method::BundleAggregate] {
            let t = super::super::run(method, &p, &config(), &x0).unwrap();
            for w in t.records.windows(2) {
                assert!(w[1].value <= w[0].value);
            }
            for r in &t.records {
                if let Some(res) = r.bundle.as_ref().unwrap().agg_residual {
                    assert!(res <= 1e-10);
                }
            }
            assert!(t.last().gap <= 1e-6, "{method}: {:?}", t.termination);
        }
    }
}
