use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::float;
use crate::point::{norm, norm_sq, sub_scaled, Point};
use crate::problems::ProblemInstance;

use super::{check_start, record, Method, SolverConfig, StepKind, Termination, Trace};

const VANISHING_SUBGRADIENT: f64 = 1e-14;

/// Subgradient method `x_{k+1} = x_k − ρ_k g_k` with the Polyak stepsize
/// `ρ_k = (F(x_k) − F*)/‖g_k‖²`.
///
/// A subgradient of norm below `1e-14` at a point with positive gap is
/// impossible for a convex function with the stated `F*` and is reported as
/// [`Error::OracleInconsistency`].
pub fn subgradient_polyak(problem: &ProblemInstance, config: &SolverConfig, x0: &Point) -> Result<Trace> {
    check_start(problem, config, x0)?;
    let (f0, mut g) = problem.eval_raw(x0);
    let mut records = Vec::new();
    records.push(record(problem, 0, StepKind::Init, x0.to_vec(), f0, None, norm(&g)));
    let mut x = x0.to_vec();
    let termination = loop {
        let last = records.last().expect("nonempty");
        if last.gap <= config.target_eps {
            break Termination::EpsReached;
        }
        if last.k == config.max_iter {
            break Termination::MaxIter;
        }
        let gn2 = norm_sq(&g);
        if float::sqrt(gn2) < VANISHING_SUBGRADIENT {
            return Err(Error::OracleInconsistency {
                iteration: last.k,
                gap: last.gap,
            });
        }
        let k = last.k + 1;
        let step = last.gap / gn2;
        x = sub_scaled(&x, step, &g);
        let (value, next_g) = problem.eval_raw(&x);
        g = next_g;
        records.push(record(problem, k, StepKind::Subgrad, x.clone(), value, Some(step), norm(&g)));
    };
    Ok(Trace {
        method: Method::Polyak,
        records,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_builtin, ProblemKind, ProblemParams};

    fn run(kind: ProblemKind, target: f64) -> Trace {
        let params = ProblemParams {
            alpha: Some(1.0),
            ..Default::default()
        };
        let p = make_builtin(kind, 1, &params, 0).unwrap();
        let c = SolverConfig {
            target_eps: target,
            ..Default::default()
        };
        subgradient_polyak(&p, &c, &Point::new(vec![1.0]).unwrap()).unwrap()
    }

    #[test]
    fn sharp_one_step() {
        let t = run(ProblemKind::SharpNorm, 1e-6);
        assert_eq!(t.records.len(), 2);
        assert_eq!(t.records[1].x[0], 0.0);
        assert_eq!(t.records[1].stepsize, Some(1.0));
    }

    #[test]
    fn quadratic_halves() {
        let t = run(ProblemKind::QuadraticNorm, 1e-6);
        assert_eq!(t.steps(), 10);
        for r in &t.records {
            assert_eq!(r.x[0], 0.5f64.powi(r.k as i32));
        }
        assert_eq!(t.records[1].stepsize, Some(0.25));
    }

    #[test]
    fn inconsistent_oracle_is_reported() {
        use crate::problems::{Oracle, ProblemInstance};
        use alloc::sync::Arc;

        #[derive(Debug)]
        struct Flat;
        impl Oracle for Flat {
            fn dim(&self) -> usize {
                1
            }
            fn value(&self, _: &[f64]) -> f64 {
                1.0
            }
            fn evaluate(&self, _: &[f64]) -> (f64, Vec<f64>) {
                (1.0, vec![0.0])
            }
        }
        let p = ProblemInstance::custom(Arc::new(Flat), Point::zeros(1), 0.0, None, 1.0).unwrap();
        let err = subgradient_polyak(&p, &SolverConfig::default(), &Point::zeros(1)).unwrap_err();
        assert!(matches!(err, Error::OracleInconsistency { iteration: 0, .. }));
    }
}
