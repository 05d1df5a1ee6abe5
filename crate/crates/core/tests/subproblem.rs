#![allow(clippy::needless_range_loop)]

use growthlift_core::solvers::{
    solve_multicut_projected_gradient, solve_multicut_subproblem, solve_two_cut_subproblem, Cut,
};
use growthlift_core::Point;
use proptest::prelude::*;

fn cut(z: &[f64], fz: f64, g: &[f64]) -> Cut {
    Cut::new(Point::new(z.to_vec()).unwrap(), fz, Point::new(g.to_vec()).unwrap()).unwrap()
}

fn primal(cuts: &[Cut], center: &[f64], rho: f64, x: &[f64]) -> f64 {
    let model = cuts.iter().map(|c| c.eval(x)).fold(f64::NEG_INFINITY, f64::max);
    let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
    model + 0.5 * rho * d2
}

/// Multilevel grid search: each level scans ±`half` steps around the current
/// best point, re-centering until the best point stops moving, then refines
/// the step tenfold.
fn grid_min(f: impl Fn(&[f64]) -> f64, start: &[f64], mut h: f64, half: i64, levels: usize) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut best = start.to_vec();
    let mut best_v = f(&best);
    for _ in 0..levels {
        for _ in 0..1000 {
            let base = best.clone();
            let total = (2 * half + 1).pow(n as u32);
            for idx in 0..total {
                let mut rem = idx;
                let x: Vec<f64> = (0..n)
                    .map(|i| {
                        let o = rem % (2 * half + 1) - half;
                        rem /= 2 * half + 1;
                        base[i] + o as f64 * h
                    })
                    .collect();
                let v = f(&x);
                if v < best_v {
                    best_v = v;
                    best = x;
                }
            }
            if best == base {
                break;
            }
        }
        h /= 10.0;
    }
    (best, best_v)
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Exhaustive active-set oracle: for every subset S of cuts, the minimizer of
/// the primal with the cuts in S held equal is `x_c − (1/ρ)Σ_S μ_i g_i`; the
/// true minimizer is the candidate with the lowest primal value.
fn enumerate_min(cuts: &[Cut], center: &[f64], rho: f64) -> (Vec<f64>, f64) {
    let m = cuts.len();
    let a: Vec<f64> = cuts.iter().map(|c| c.eval(center)).collect();
    let ip = |i: usize, j: usize| cuts[i].g.iter().zip(cuts[j].g.iter()).map(|(x, y)| x * y).sum::<f64>();
    let mut best = (center.to_vec(), f64::INFINITY);
    for mask in 1u32..(1 << m) {
        let s: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        let mut rows = vec![vec![1.0; s.len()]];
        let mut rhs = vec![1.0];
        for &i in &s[1..] {
            rows.push(s.iter().map(|&k| (ip(i, k) - ip(s[0], k)) / rho).collect());
            rhs.push(a[i] - a[s[0]]);
        }
        let Some(mu) = solve_dense(rows, rhs) else { continue };
        let x: Vec<f64> = (0..center.len())
            .map(|d| center[d] - s.iter().zip(&mu).map(|(&k, w)| w * cuts[k].g[d]).sum::<f64>() / rho)
            .collect();
        let v = primal(cuts, center, rho, &x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

#[test]
fn kink_example_against_grid() {
    // ℓ₁(x) = x, ℓ₂(x) = −x, x_c = 1, ρ = 1: objective |x| + ½(x − 1)²
    let cuts = [cut(&[0.0], 0.0, &[1.0]), cut(&[0.0], 0.0, &[-1.0])];
    let sol = solve_multicut_subproblem(&cuts, &[1.0], 1.0).unwrap();
    let (x, v) = grid_min(|x| primal(&cuts, &[1.0], 1.0, x), &[1.0], 1e-2, 400, 5);
    assert!((sol.z[0] - x[0]).abs() <= 1e-6);
    assert!((sol.model_value + 0.5 - v).abs() <= 1e-10);
    // all weight on ℓ₁, so the recovered point is x_c − g₁/ρ = 0
    assert!((sol.lambda[0] - 1.0).abs() < 1e-12);

    let two = solve_two_cut_subproblem(&cuts[0], Some(&cuts[1]), &[1.0], 1.0).unwrap();
    assert!((two.z[0] - x[0]).abs() <= 1e-6);
    assert!(two.theta.abs() < 1e-12);
}

fn cuts_strategy() -> impl Strategy<Value = (Vec<Cut>, Vec<f64>, f64)> {
    (1usize..=2, 1usize..=3).prop_flat_map(|(n, m)| {
        let c = (
            prop::collection::vec(-1.0..1.0f64, n),
            -1.0..1.0f64,
            prop::collection::vec(-2.0..2.0f64, n),
        )
            .prop_map(|(z, fz, g)| cut(&z, fz, &g));
        (
            prop::collection::vec(c, m),
            prop::collection::vec(-1.0..1.0f64, n),
            0.2..5.0f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_grid_oracle((cuts, center, rho) in cuts_strategy()) {
        let sol = solve_multicut_subproblem(&cuts, &center, rho).unwrap();
        // the minimizer lies within max‖g‖/ρ of the center
        let reach = cuts.iter().map(|c| c.g.iter().map(|g| g * g).sum::<f64>().sqrt()).fold(0.0, f64::max) / rho;
        let half = if center.len() == 1 { 500 } else { 25 };
        let h0 = (reach + 0.1) / half as f64;
        let levels = (h0 / 1e-8).log10().ceil() as usize;
        let (_, v) = grid_min(|x| primal(&cuts, &center, rho, x), &center, h0, half, levels);
        let v_sol = primal(&cuts, &center, rho, &sol.z);
        prop_assert!(v_sol <= v + 1e-9, "solver {v_sol} grid {v}");
        let (x_enum, v_enum) = enumerate_min(&cuts, &center, rho);
        prop_assert!((v_sol - v_enum).abs() <= 1e-8);
        let err = x_enum.iter().zip(sol.z.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-5, "argument error {err}");
    }

    #[test]
    fn dual_certificates((cuts, center, rho) in cuts_strategy()) {
        let sol = solve_multicut_subproblem(&cuts, &center, rho).unwrap();
        prop_assert!(sol.lambda.iter().all(|&l| l >= 0.0));
        prop_assert!((sol.lambda.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..center.len() {
            let combo: f64 = sol.lambda.iter().zip(&cuts).map(|(l, c)| l * c.g[i]).sum();
            prop_assert!((sol.z[i] - (center[i] - combo / rho)).abs() <= 1e-10);
        }
        for (l, c) in sol.lambda.iter().zip(&cuts) {
            if *l > 1e-9 {
                prop_assert!((c.eval(&sol.z) - sol.model_value).abs() <= 1e-8);
            }
        }
        let weighted: f64 = sol.lambda.iter().zip(&cuts).map(|(l, c)| l * c.eval(&sol.z)).sum();
        prop_assert!(sol.model_value - weighted <= 1e-8);
    }

    #[test]
    fn agrees_with_projected_gradient((cuts, center, rho) in cuts_strategy()) {
        let exact = solve_multicut_subproblem(&cuts, &center, rho).unwrap();
        let pg = solve_multicut_projected_gradient(&cuts, &center, rho, 1_000_000, 1e-12).unwrap();
        let v_exact = primal(&cuts, &center, rho, &exact.z);
        let v_pg = primal(&cuts, &center, rho, &pg.z);
        prop_assert!(v_exact <= v_pg + 1e-10);
        prop_assert!((v_exact - v_pg).abs() <= 1e-8);
    }

    #[test]
    fn two_cut_is_a_special_case((cuts, center, rho) in cuts_strategy()) {
        prop_assume!(cuts.len() == 2);
        let multi = solve_multicut_subproblem(&cuts, &center, rho).unwrap();
        let two = solve_two_cut_subproblem(&cuts[0], Some(&cuts[1]), &center, rho).unwrap();
        let v_multi = primal(&cuts, &center, rho, &multi.z);
        let v_two = primal(&cuts, &center, rho, &two.z);
        prop_assert!((v_multi - v_two).abs() <= 1e-10);
        prop_assert!((0.0..=1.0).contains(&two.theta));
    }
}

#[test]
fn many_cuts_in_five_dimensions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = 5;
        let cuts: Vec<Cut> = (0..40)
            .map(|_| {
                let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                cut(&z, rng.gen_range(-1.0..1.0), &g)
            })
            .collect();
        let center: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let exact = solve_multicut_subproblem(&cuts, &center, 0.7).unwrap();
        let pg = solve_multicut_projected_gradient(&cuts, &center, 0.7, 1_000_000, 1e-12).unwrap();
        let (a, b) = (primal(&cuts, &center, 0.7, &exact.z), primal(&cuts, &center, 0.7, &pg.z));
        assert!(a <= b + 1e-10 && (a - b).abs() <= 1e-8, "{a} {b}");
    }
}
