use growthlift_core::problems::{lift_general, lift_higher, make_builtin, ProblemInstance, ProblemKind, ProblemParams};
use proptest::prelude::*;

fn instance(kind_ix: usize, n: usize, seed: u64, alpha: f64) -> ProblemInstance {
    let (kind, p) = match kind_ix % 5 {
        0 => (ProblemKind::SharpNorm, None),
        1 => (ProblemKind::QuadraticNorm, None),
        2 => (ProblemKind::HolderNorm, Some(1.5)),
        3 => (ProblemKind::MaxAffine, None),
        _ => (ProblemKind::LiftedHinge, None),
    };
    let params = ProblemParams {
        alpha: Some(alpha),
        p,
        ..Default::default()
    };
    make_builtin(kind, n, &params, seed).unwrap()
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, n)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn prox_objective(f: &ProblemInstance, y: &[f64], x: &[f64], rho: f64) -> f64 {
    f.value(y).unwrap() + dist(y, x).powi(2) / (2.0 * rho)
}

proptest! {
    #[test]
    fn subgradient_inequality(kind in 0usize..5, seed in 0u64..50, (x, y) in (1usize..4).prop_flat_map(|n| (point(n), point(n)))) {
        let f = instance(kind, x.len(), seed, 1.3);
        let (fx, g) = f.evaluate(&x).unwrap();
        let lin: f64 = fx + g.iter().zip(y.iter().zip(&x)).map(|(g, (y, x))| g * (y - x)).sum::<f64>();
        prop_assert!(f.value(&y).unwrap() >= lin - 1e-9 * (1.0 + lin.abs()));
    }

    #[test]
    fn growth_certificate_holds(kind in 0usize..5, seed in 0u64..50, x in (1usize..4).prop_flat_map(point)) {
        let f = instance(kind, x.len(), seed, 0.7);
        let cert = f.growth().unwrap();
        let floor = f.min_value() + cert.coefficient * dist(&x, f.minimizer()).powf(cert.exponent);
        prop_assert!(f.value(&x).unwrap() >= floor - 1e-12 * (1.0 + floor.abs()));
        prop_assert_eq!(f.value(f.minimizer()).unwrap(), f.min_value());
    }

    #[test]
    fn prox_minimizes_its_objective(
        kind in 0usize..5,
        seed in 0u64..20,
        rho in 0.05..3.0f64,
        (x, dirs) in (1usize..4).prop_flat_map(|n| (point(n), prop::collection::vec(point(n), 8))),
    ) {
        let f = instance(kind, x.len(), seed, 1.1);
        let y = f.prox(&x, rho).unwrap();
        let best = prox_objective(&f, &y, &x, rho);
        for d in &dirs {
            for scale in [1e-1, 1e-3] {
                let w: Vec<f64> = y.iter().zip(d).map(|(a, b)| a + scale * b).collect();
                prop_assert!(best <= prox_objective(&f, &w, &x, rho) + 1e-9);
            }
        }
    }

    #[test]
    fn lifted_dominates_base_and_floor(
        kind in 0usize..4,
        seed in 0u64..20,
        eps in 1e-4..1.0f64,
        p in 1.0..3.0f64,
        x in (1usize..4).prop_flat_map(point),
    ) {
        let f = instance(kind, x.len(), seed, 1.0);
        let g = lift_general(&f, eps, 4.0, p).unwrap();
        prop_assert!((g.coefficient() - eps / 4f64.powf(p)).abs() <= 1e-15 * g.coefficient());
        let gx = g.value(&x);
        let fx = f.value(&x).unwrap();
        prop_assert!(gx >= fx);
        prop_assert!(gx >= g.floor_value(&x));
        prop_assert_eq!(gx, fx.max(g.floor_value(&x)));
        if fx >= g.floor_value(&x) {
            let (_, gf) = f.evaluate(&x).unwrap();
            prop_assert_eq!(g.evaluate(&x).1, gf.to_vec());
        }
    }

    #[test]
    fn lifted_prox_minimizes(
        kind in 0usize..4,
        seed in 0u64..10,
        rho in 0.05..3.0f64,
        eps in 1e-2..1.0f64,
        p in prop::sample::select(vec![1.0, 2.0]),
        (x, dirs) in (1usize..4).prop_flat_map(|n| (point(n), prop::collection::vec(point(n), 8))),
    ) {
        let f = instance(kind, x.len(), seed, 1.0);
        let g = lift_general(&f, eps, 1.0, p).unwrap().into_problem();
        let y = g.prox(&x, rho).unwrap();
        let best = prox_objective(&g, &y, &x, rho);
        for d in &dirs {
            for scale in [1e-1, 1e-3] {
                let w: Vec<f64> = y.iter().zip(d).map(|(a, b)| a + scale * b).collect();
                prop_assert!(best <= prox_objective(&g, &w, &x, rho) + 1e-9);
            }
        }
    }
}

#[test]
fn higher_lift_coefficient() {
    let params = ProblemParams {
        alpha: Some(2.0),
        ..Default::default()
    };
    let f = make_builtin(ProblemKind::QuadraticNorm, 2, &params, 0).unwrap();
    let g = lift_higher(&f, 0.08, 1.0).unwrap();
    assert!((g.coefficient() - (2.0f64 * 0.08).sqrt()).abs() < 1e-15);
    assert!(lift_higher(&f, 0.08, 2.0).is_err());
    let sharp = make_builtin(ProblemKind::SharpNorm, 2, &params, 0).unwrap();
    assert!(lift_higher(&sharp, 0.08, 1.0).is_err());
}

/// Grid search over a box; the max-affine minimizer must be found within
/// the grid resolution.
#[test]
fn max_affine_minimum_matches_grid() {
    let params = ProblemParams {
        m: Some(6),
        ..Default::default()
    };
    let f = make_builtin(ProblemKind::MaxAffine, 2, &params, 7).unwrap();
    let (mut best, mut arg) = (f64::INFINITY, [0.0, 0.0]);
    let h = 1e-2;
    for i in -300..=300 {
        for j in -300..=300 {
            let x = [i as f64 * h, j as f64 * h];
            let v = f.value(&x).unwrap();
            if v < best {
                best = v;
                arg = x;
            }
        }
    }
    assert!(best >= f.min_value());
    assert!(best - f.min_value() <= f.lipschitz() * h);
    assert!(dist(&arg, f.minimizer()) <= 1e-2 + 1e-12);
}
