use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::{norm, Point};
use crate::problems::ProblemInstance;

use super::{check_start, record, Method, SolverConfig, StepKind, Termination, Trace};

/// Proximal point method `x_{k+1} = prox_{ρ,F}(x_k)` with constant `ρ`.
///
/// Stops at the first `x_k` with gap at most `target_eps`, or after
/// `max_iter` steps. The recorded subgradient norm for `k ≥ 1` is that of the
/// implicit subgradient `(x_{k−1} − x_k)/ρ ∈ ∂F(x_k)`.
pub fn proximal_point(problem: &ProblemInstance, config: &SolverConfig, x0: &Point) -> Result<Trace> {
    check_start(problem, config, x0)?;
    if !problem.has_prox() {
        return Err(Error::Capability("prox oracle"));
    }
    let rho = config.rho;
    let (f0, g0) = problem.eval_raw(x0);
    let mut records = Vec::new();
    records.push(record(problem, 0, StepKind::Init, x0.to_vec(), f0, None, norm(&g0)));
    let mut x = x0.to_vec();
    let termination = loop {
        let last = records.last().expect("nonempty");
        if last.gap <= config.target_eps {
            break Termination::EpsReached;
        }
        if last.k == config.max_iter {
            break Termination::MaxIter;
        }
        let k = last.k + 1;
        let next = problem.prox_raw(&x, rho)?;
        let implicit: Vec<f64> = x.iter().zip(&next).map(|(a, b)| (a - b) / rho).collect();
        let value = problem.value_raw(&next);
        records.push(record(problem, k, StepKind::Prox, next.clone(), value, Some(rho), norm(&implicit)));
        x = next;
    };
    Ok(Trace {
        method: Method::Prox,
        records,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_builtin, ProblemKind, ProblemParams};

    fn problem(kind: ProblemKind, alpha: f64) -> ProblemInstance {
        let params = ProblemParams {
            alpha: Some(alpha),
            ..Default::default()
        };
        make_builtin(kind, 1, &params, 0).unwrap()
    }

    fn config(rho: f64) -> SolverConfig {
        SolverConfig {
            rho,
            target_eps: 1e-6,
            ..Default::default()
        }
    }

    #[test]
    fn soft_threshold_trajectory() {
        let p = problem(ProblemKind::SharpNorm, 1.0);
        let t = proximal_point(&p, &config(0.1), &Point::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(t.records.len(), 11);
        for r in &t.records {
            let want = (1.0 - 0.1 * r.k as f64).max(0.0);
            assert!((r.x[0] - want).abs() <= 1e-12, "k={} x={}", r.k, r.x[0]);
        }
        assert_eq!(t.last().gap, 0.0);
        assert_eq!(t.termination, Termination::EpsReached);
    }

    #[test]
    fn quadratic_halves() {
        let p = problem(ProblemKind::QuadraticNorm, 1.0);
        let mut c = config(0.5);
        c.max_iter = 5;
        c.target_eps = 1e-300;
        let t = proximal_point(&p, &c, &Point::new(vec![1.0]).unwrap()).unwrap();
        for r in &t.records {
            assert_eq!(r.x[0], 0.5f64.powi(r.k as i32));
        }
        assert_eq!(t.termination, Termination::MaxIter);
    }

    #[test]
    fn start_at_minimizer() {
        let p = problem(ProblemKind::SharpNorm, 1.0);
        let t = proximal_point(&p, &config(0.1), &Point::zeros(1)).unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.last().gap, 0.0);
    }
}
