use growthlift_core::problems::{make_builtin, ProblemInstance, ProblemKind, ProblemParams};
use growthlift_core::solvers::{run, Method, SolverConfig, StepKind, Termination};
use growthlift_core::Point;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn instance(kind_ix: usize, n: usize, seed: u64) -> ProblemInstance {
    let (kind, p) = match kind_ix % 4 {
        0 => (ProblemKind::SharpNorm, None),
        1 => (ProblemKind::QuadraticNorm, None),
        2 => (ProblemKind::HolderNorm, Some(1.5)),
        _ => (ProblemKind::MaxAffine, None),
    };
    let params = ProblemParams {
        alpha: Some(0.8),
        p,
        ..Default::default()
    };
    make_builtin(kind, n, &params, seed).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn start() -> impl Strategy<Value = (usize, u64, Vec<f64>)> {
    (0usize..4, 0u64..100, 1usize..=5).prop_flat_map(|(k, s, n)| (Just(k), Just(s), prop::collection::vec(-3.0..3.0f64, n)))
}

fn config(rho: f64) -> SolverConfig {
    SolverConfig {
        rho,
        beta: 0.4,
        max_iter: 300,
        target_eps: 1e-6,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prox_invariants((kind, seed, x0) in start(), rho in 0.1..2.0f64, probe_seed in 0u64..1000) {
        let f = instance(kind, x0.len(), seed);
        let t = run(Method::Prox, &f, &config(rho), &Point::new(x0).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(probe_seed);
        for w in t.records.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            prop_assert!(next.dist <= prev.dist + 1e-9);
            let step = dist(&prev.x, &next.x);
            prop_assert!(next.value <= prev.value - step * step / (2.0 * rho) + 1e-9);
            // (x_k − x_{k+1})/ρ is a subgradient at x_{k+1}
            let v: Vec<f64> = prev.x.iter().zip(next.x.iter()).map(|(a, b)| (a - b) / rho).collect();
            for _ in 0..5 {
                let y: Vec<f64> = next.x.iter().map(|c| c + rng.gen_range(-1.0..1.0)).collect();
                let lin = next.value + v.iter().zip(y.iter().zip(next.x.iter())).map(|(g, (y, x))| g * (y - x)).sum::<f64>();
                prop_assert!(f.value(&y).unwrap() >= lin - 1e-8);
            }
        }
    }

    #[test]
    fn polyak_recurrence((kind, seed, x0) in start()) {
        let f = instance(kind, x0.len(), seed);
        let t = run(Method::Polyak, &f, &config(1.0), &Point::new(x0).unwrap()).unwrap();
        let l = f.lipschitz();
        for w in t.records.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            prop_assert!(b.dist * b.dist <= a.dist * a.dist - a.gap * a.gap / (l * l) + 1e-9);
            prop_assert!(b.stepsize.unwrap() > 0.0);
        }
    }

    #[test]
    fn bundle_invariants((kind, seed, x0) in start(), rho in 0.2..3.0f64, agg in any::<bool>(), probe_seed in 0u64..1000) {
        let method = if agg { Method::BundleAggregate } else { Method::BundleMulticut };
        let f = instance(kind, x0.len(), seed);
        let cfg = config(rho);
        let x0 = Point::new(x0).unwrap();
        let t = run(method, &f, &cfg, &x0).unwrap();
        prop_assert_eq!(&t, &run(method, &f, &cfg, &x0).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(probe_seed);
        let l = t.max_subgrad_norm();
        let d0 = t.records[0].dist;
        let beta = cfg.beta;
        let radius2 = 2.0 * (1.0 + (1.0 - beta) / beta) * (d0 * d0 + l * l / (rho * rho)) + 1e-6;
        for (i, r) in t.records.iter().enumerate() {
            let b = r.bundle.as_ref().unwrap();
            prop_assert!(b.z_dist * b.z_dist <= radius2);
            for _ in 0..20 {
                let y: Vec<f64> = r.x.iter().map(|c| c + rng.gen_range(-4.0..4.0)).collect();
                let model = b.model.iter().map(|c| c.eval(&y)).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(model <= f.value(&y).unwrap() + 1e-10);
            }
            let weighted: f64 = b.weights.iter().zip(&b.model).map(|(w, c)| w * c.eval(&b.z)).sum();
            prop_assert!((weighted - b.model_value).abs() <= 1e-8 * (1.0 + b.model_value.abs()));
            if let Some(res) = b.agg_residual {
                prop_assert!(res <= 1e-10);
            }
            if let Some(next) = t.records.get(i + 1) {
                prop_assert!(next.value <= r.value);
                // the newest cut of the next model was taken at z_{k+1}
                let nb = next.bundle.as_ref().unwrap();
                let newest = if agg { &nb.model[0] } else { nb.model.last().unwrap() };
                prop_assert_eq!(&newest.z, &b.z);
                let descent = newest.fz <= r.value - beta * b.model_gap;
                prop_assert_eq!(next.step_kind, if descent { StepKind::Descent } else { StepKind::Null });
            }
        }
    }
}

#[test]
fn bundle_reaches_target_on_max_affine() {
    for seed in 0..10 {
        let f = instance(3, 3, seed);
        let x0 = Point::new(vec![2.0, -1.0, 0.5]).unwrap();
        // aggregation converges sublinearly through long null-step runs
        for (method, target) in [
            (Method::BundleMulticut, 1e-6),
            (Method::Polyak, 1e-6),
            (Method::BundleAggregate, 1e-3),
        ] {
            let cfg = SolverConfig {
                max_iter: 5000,
                target_eps: target,
                ..config(1.0)
            };
            let t = run(method, &f, &cfg, &x0).unwrap();
            assert_ne!(t.termination, Termination::MaxIter, "{method} seed {seed}");
            assert!(t.last().gap <= target, "{method} seed {seed}");
        }
    }
}

#[test]
fn prox_requires_oracle() {
    use growthlift_core::problems::Oracle;
    use std::sync::Arc;

    #[derive(Debug)]
    struct Abs;
    impl Oracle for Abs {
        fn dim(&self) -> usize {
            1
        }
        fn value(&self, x: &[f64]) -> f64 {
            x[0].abs()
        }
        fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
            (x[0].abs(), vec![if x[0] > 0.0 { 1.0 } else if x[0] < 0.0 { -1.0 } else { 0.0 }])
        }
    }
    let f = ProblemInstance::custom(Arc::new(Abs), Point::zeros(1), 0.0, None, 1.0).unwrap();
    let x0 = Point::new(vec![1.0]).unwrap();
    assert!(matches!(
        run(Method::Prox, &f, &config(1.0), &x0),
        Err(growthlift_core::Error::Capability(_))
    ));
    assert_eq!(run(Method::Polyak, &f, &config(1.0), &x0).unwrap().steps(), 1);
}
