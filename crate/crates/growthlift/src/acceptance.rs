//! End-to-end acceptance suite.
//!
//! Eleven criteria, each runnable on its own through [`run_criterion`] or
//! all together (in parallel) through [`run_all`]. Random instances are
//! drawn from seeded generators, so results are reproducible for a given
//! seed.

use std::thread;

use growthlift_core::bounds::{lift_general_bound, lift_higher_bound, BoundKind, BoundParams, RateBound};
use growthlift_core::problems::{make_builtin, ProblemInstance, ProblemKind, ProblemParams};
use growthlift_core::solvers::{self, solve_multicut_subproblem, Cut, Method, SolverConfig, Trace};
use growthlift_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::harness::{
    check_aggregation, check_distance, check_equivalence, check_higher_equivalence, check_incumbent_monotone,
    check_model_lower_bound, check_polyak_recurrence, run_instance, CheckName, EquivalenceReport,
};

/// Criterion ids and names.
pub const CRITERIA: [(u32, &str); 11] = [
    (1, "prox_closed_form"),
    (2, "polyak_geometric_decay"),
    (3, "subgradient_recurrence"),
    (4, "lifting_equivalence"),
    (5, "higher_lifting_equivalence"),
    (6, "bound_compliance"),
    (7, "lifted_bound_algebra"),
    (8, "subproblem_oracle"),
    (9, "aggregation_identity"),
    (10, "bundle_distance"),
    (11, "model_lower_bound"),
];

const MAX_REPORTED_FAILURES: usize = 10;

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    /// Criterion id.
    pub id: u32,
    /// Short name.
    pub name: String,
    /// Whether every sub-check passed.
    pub passed: bool,
    /// Number of sub-checks evaluated.
    pub checks: usize,
    /// Number of failed sub-checks.
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
    /// Summary of what was measured.
    pub detail: String,
}

/// Name of criterion `id`.
pub fn criterion_name(id: u32) -> Option<&'static str> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, n)| *n)
}

/// Runs one criterion.
pub fn run_criterion(id: u32, seed: u64) -> Result<CriterionResult> {
    let name = criterion_name(id).ok_or_else(|| invalid("only", format!("unknown criterion {id}")))?;
    let mut t = Tally::default();
    let detail = match id {
        1 => prox_closed_form(&mut t),
        2 => polyak_geometric_decay(&mut t),
        3 => subgradient_recurrence(&mut t, seed),
        4 => lifting_equivalence(&mut t, seed),
        5 => higher_lifting_equivalence(&mut t, seed),
        6 => bound_compliance(&mut t, seed),
        7 => lifted_bound_algebra(&mut t, seed),
        8 => subproblem_oracle(&mut t, seed),
        9 => aggregation_identity(&mut t, seed),
        10 => bundle_distance(&mut t, seed),
        _ => model_lower_bound(&mut t, seed),
    };
    Ok(CriterionResult {
        id,
        name: name.to_string(),
        passed: t.failed == 0 && t.checks > 0,
        checks: t.checks,
        failed: t.failed,
        failures: t.failures,
        detail,
    })
}

/// Runs the given criteria on worker threads; results are sorted by id.
pub fn run_selected(ids: &[u32], seed: u64) -> Result<Vec<CriterionResult>> {
    for &id in ids {
        criterion_name(id).ok_or_else(|| invalid("only", format!("unknown criterion {id}")))?;
    }
    let mut results = thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&id| s.spawn(move || run_criterion(id, seed))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by_key(|r| r.id);
    Ok(results)
}

/// Runs every criterion.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    let ids: Vec<u32> = CRITERIA.iter().map(|(id, _)| *id).collect();
    run_selected(&ids, seed).expect("all ids are known")
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                None
            }
        }
    }
}

struct Case {
    label: String,
    problem: ProblemInstance,
    x0: Point,
}

fn start(n: usize) -> Point {
    const PATTERN: [f64; 5] = [1.0, -0.5, 0.75, -1.25, 0.3];
    Point::new((0..n).map(|i| PATTERN[i % 5]).collect()).expect("finite")
}

fn case(kind: ProblemKind, n: usize, p: Option<f64>, seed: u64) -> Case {
    let params = ProblemParams {
        p,
        ..Default::default()
    };
    let problem = make_builtin(kind, n, &params, seed).expect("valid builtin parameters");
    let label = match (kind, p) {
        (ProblemKind::HolderNorm, Some(p)) => format!("holder_norm(p={p},n={n})"),
        (ProblemKind::MaxAffine, _) => format!("max_affine(n={n},seed={seed})"),
        _ => format!("{}(n={n})", kind.name()),
    };
    Case {
        label,
        problem,
        x0: start(n),
    }
}

fn sharp_cases() -> Vec<Case> {
    vec![case(ProblemKind::SharpNorm, 1, None, 0), case(ProblemKind::SharpNorm, 3, None, 0)]
}

fn quadratic_cases() -> Vec<Case> {
    vec![case(ProblemKind::QuadraticNorm, 2, None, 0), case(ProblemKind::QuadraticNorm, 5, None, 0)]
}

fn max_affine_cases(seed: u64) -> Vec<Case> {
    [(2, 7), (3, 3), (5, 5)]
        .into_iter()
        .map(|(n, s)| case(ProblemKind::MaxAffine, n, None, seed.wrapping_add(s)))
        .collect()
}

fn holder_cases() -> Vec<Case> {
    vec![
        case(ProblemKind::HolderNorm, 2, Some(1.5), 0),
        case(ProblemKind::HolderNorm, 1, Some(3.0), 0),
    ]
}

fn config(method: Method) -> SolverConfig {
    match method {
        Method::Prox => SolverConfig {
            rho: 0.5,
            max_iter: 100_000,
            ..Default::default()
        },
        _ => SolverConfig {
            rho: 1.0,
            beta: 0.5,
            max_iter: 100_000,
            ..Default::default()
        },
    }
}

/// Every (method, problem) pair used by the equivalence criteria.
fn equivalence_pairs(seed: u64) -> Vec<(Method, Case)> {
    let mut pairs = Vec::new();
    for method in [Method::Polyak, Method::BundleMulticut, Method::BundleAggregate] {
        for c in sharp_cases().into_iter().chain(quadratic_cases()).chain(max_affine_cases(seed)) {
            pairs.push((method, c));
        }
    }
    for c in sharp_cases().into_iter().chain(quadratic_cases()).chain(holder_cases()) {
        pairs.push((Method::Prox, c));
    }
    pairs
}

fn bundle_runs(t: &mut Tally, seed: u64) -> Vec<(Case, Trace)> {
    let mut runs = Vec::new();
    for method in [Method::BundleMulticut, Method::BundleAggregate] {
        let cases = sharp_cases()
            .into_iter()
            .chain(quadratic_cases())
            .chain(max_affine_cases(seed))
            .chain(holder_cases());
        for c in cases {
            let cfg = SolverConfig {
                target_eps: 1e-4,
                ..config(method)
            };
            let label = format!("{method} on {}", c.label);
            if let Some(trace) = t.ok(solvers::run(method, &c.problem, &cfg, &c.x0).map_err(Into::into), || label) {
                runs.push((c, trace));
            }
        }
    }
    runs
}

fn prox_closed_form(t: &mut Tally) -> String {
    let problem = make_builtin(ProblemKind::SharpNorm, 1, &ProblemParams::default(), 0).expect("valid");
    let cfg = SolverConfig {
        rho: 0.1,
        ..Default::default()
    };
    let x0 = Point::new(vec![1.0]).expect("finite");
    let Some(outcome) = t.ok(run_instance(&problem, Method::Prox, &cfg, &x0, &[1e-6], &[]), || "prox run".into())
    else {
        return String::new();
    };
    let trace = &outcome.trace;
    let mut worst = 0.0f64;
    for r in &trace.records {
        let want = (1.0 - 0.1 * r.k as f64).max(0.0);
        worst = worst.max((r.x[0] - want).abs());
    }
    t.check(worst <= 1e-12, || format!("x_k differs from max(0, 1 − 0.1k) by {worst:e}"));
    let hit = trace.first_eps_index(1e-6);
    t.check(hit == Some(10), || format!("first ε-minimizer at {hit:?}, expected 10"));
    t.check(trace.last().gap == 0.0, || format!("final gap {:e}", trace.last().gap));
    let params = BoundParams {
        gap0: Some(1.0),
        rho: Some(0.1),
        alpha: Some(1.0),
        ..Default::default()
    };
    let bound = BoundKind::ProxSharp.evaluate(&params).unwrap_or(f64::NAN);
    t.check(bound == 20.0, || format!("k_prox_sharp = {bound}, expected 20"));
    for report in &outcome.reports {
        t.check(report.passed, || format!("{}: {}", report.name, report.detail));
    }
    format!(
        "max |x_k − max(0,1−0.1k)| = {worst:e}; minimizer reached at k={} ≤ bound {bound}",
        hit.map_or("-".into(), |k| k.to_string())
    )
}

fn polyak_geometric_decay(t: &mut Tally) -> String {
    let problem = make_builtin(ProblemKind::QuadraticNorm, 1, &ProblemParams::default(), 0).expect("valid");
    let x0 = Point::new(vec![1.0]).expect("finite");
    let Some(outcome) = t.ok(
        run_instance(&problem, Method::Polyak, &SolverConfig::default(), &x0, &[1e-6], &[]),
        || "polyak run".into(),
    ) else {
        return String::new();
    };
    let trace = &outcome.trace;
    let mut worst = 0.0f64;
    for r in &trace.records {
        let want = 0.5f64.powi(r.k as i32);
        worst = worst.max((r.x[0] - want).abs() / want);
    }
    t.check(worst <= 1e-12, || format!("x_k differs from 2^-k by relative {worst:e}"));
    let decreasing = trace.records.windows(2).all(|w| w[1].dist < w[0].dist);
    t.check(decreasing, || "distances not strictly decreasing".into());
    let hit = trace.first_eps_index(1e-6);
    t.check(hit == Some(10), || format!("first ε-minimizer at {hit:?}, expected 10"));
    for report in &outcome.reports {
        t.check(report.passed, || format!("{}: {}", report.name, report.detail));
    }
    format!("{} iterates, max relative error vs 2^-k {worst:e}", trace.records.len())
}

fn subgradient_recurrence(t: &mut Tally, seed: u64) -> String {
    let mut worst = f64::NEG_INFINITY;
    let mut iterations = 0;
    for i in 0..20u64 {
        let n = 1 + (i % 5) as usize;
        let s = seed.wrapping_add(i);
        let problem = make_builtin(ProblemKind::MaxAffine, n, &ProblemParams::default(), s).expect("valid");
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
        let x0 = Point::new((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).expect("finite");
        let cfg = SolverConfig {
            target_eps: 1e-8,
            max_iter: 10_000,
            ..Default::default()
        };
        let Some(trace) = t.ok(solvers::run(Method::Polyak, &problem, &cfg, &x0).map_err(Into::into), || {
            format!("polyak on max_affine(n={n},seed={s})")
        }) else {
            continue;
        };
        iterations += trace.steps();
        let report = check_polyak_recurrence(&trace, problem.lipschitz());
        worst = worst.max(report.worst_residual);
        t.check(report.passed, || format!("max_affine(n={n},seed={s}): {}", report.detail));
    }
    format!("20 instances, {iterations} steps, worst residual {worst:e} (tolerance 1e-9)")
}

fn summarize(reports: &[EquivalenceReport]) -> String {
    let bitwise = reports.iter().filter(|r| r.bitwise_identical).count();
    let excused = reports.iter().filter(|r| r.excused_at_horizon).count();
    let unreached = reports.iter().filter(|r| r.horizon.is_none()).count();
    let worst = reports.iter().map(|r| r.report.worst_residual).fold(0.0, f64::max);
    format!(
        "{} comparisons, {bitwise} bitwise identical, {excused} implicit steps excused at the horizon, \
         {unreached} without an ε-minimizer, worst relative difference {worst:e}",
        reports.len()
    )
}

fn lifting_equivalence(t: &mut Tally, seed: u64) -> String {
    let mut reports = Vec::new();
    for (method, c) in equivalence_pairs(seed) {
        for eps in [1e-2, 1e-4] {
            for p in [1.0, 2.0] {
                let what = || format!("{method} on {} ε={eps:e} p={p}", c.label);
                let r = check_equivalence(&c.problem, method, &config(method), &c.x0, eps, p);
                if let Some(r) = t.ok(r, what) {
                    t.check(r.passed(), || format!("{}: {}", what(), r.report.detail));
                    reports.push(r);
                }
            }
        }
    }
    summarize(&reports)
}

fn higher_lifting_equivalence(t: &mut Tally, _seed: u64) -> String {
    let mut reports = Vec::new();
    for method in Method::ALL {
        for c in quadratic_cases() {
            for eps in [1e-2, 1e-4] {
                let what = || format!("{method} on {} ε={eps:e}", c.label);
                let r = check_higher_equivalence(&c.problem, method, &config(method), &c.x0, eps, 1.0);
                let Some(r) = t.ok(r, what) else { continue };
                t.check(r.passed(), || {
                    let split = r.case_split.as_ref().map_or(String::new(), |s| format!("; case split: {}", s.detail));
                    format!("{}: {}{split}", what(), r.report.detail)
                });
                let alpha = c.problem.growth().expect("certified").coefficient;
                let want = (alpha * eps).sqrt();
                t.check(((r.coefficient - want) / want).abs() <= 1e-12, || {
                    format!("{}: coefficient {} ≠ √(αε) = {want}", what(), r.coefficient)
                });
                reports.push(r);
            }
        }
    }
    summarize(&reports)
}

fn bound_compliance(t: &mut Tally, seed: u64) -> String {
    let mut runs: Vec<(Method, Case)> = Vec::new();
    for c in sharp_cases().into_iter().chain(quadratic_cases()) {
        runs.push((Method::Prox, c));
    }
    for c in sharp_cases().into_iter().chain(quadratic_cases()).chain(max_affine_cases(seed)) {
        runs.push((Method::Polyak, c));
    }
    for method in [Method::BundleMulticut, Method::BundleAggregate] {
        for c in quadratic_cases() {
            runs.push((method, c));
        }
    }
    let mut lines = Vec::new();
    for (method, c) in runs {
        let what = || format!("{method} on {}", c.label);
        let outcome = run_instance(&c.problem, method, &config(method), &c.x0, &[1e-2, 1e-4, 1e-6], &[CheckName::Bound]);
        let Some(outcome) = t.ok(outcome, what) else { continue };
        let report = &outcome.reports[0];
        t.check(report.passed, || format!("{}: {}", what(), report.detail));
        lines.push(format!("{} {}", what(), report.detail));
    }
    lines.join(" | ")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn lifted_bound_algebra(t: &mut Tally, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    let mut worst = 0.0f64;
    let general = |k: BoundKind, p: f64| lift_general_bound(RateBound::new(k), p).expect("valid exponent");
    let higher = |k: BoundKind, p: f64, q: f64| lift_higher_bound(RateBound::new(k), p, q).expect("valid exponents");
    for i in 0..100 {
        let d0 = rng.gen_range(0.1..10.0f64);
        let eps = 10f64.powf(rng.gen_range(-4.0..-1.0));
        let rho = rng.gen_range(0.05..5.0f64);
        let l = rng.gen_range(1.0..10.0f64);
        let alpha = rng.gen_range(0.05..5.0f64);
        let gap0 = l * d0 * rng.gen_range(0.1..1.0) + eps;
        let params = BoundParams {
            dist0: Some(d0),
            gap0: Some(gap0),
            rho: Some(rho),
            lipschitz: Some(l),
            alpha: Some(alpha),
            epsilon: Some(eps),
            d: Some(d0),
            ..Default::default()
        };
        let log_ld = (l * d0 / eps).ln();
        let expectations = [
            (
                "prox quadratic, general p=2",
                general(BoundKind::ProxQuadratic, 2.0),
                (gap0 / eps).ln() / (rho * eps / (2.0 * d0 * d0)).ln_1p(),
            ),
            (
                "prox sharp, general p=1",
                general(BoundKind::ProxSharp, 1.0),
                2.0 * gap0 * d0 * d0 / (rho * eps * eps),
            ),
            (
                "prox sharp, higher (1,2)",
                higher(BoundKind::ProxSharp, 1.0, 2.0),
                2.0 * gap0 / (rho * alpha * eps),
            ),
            (
                "subgradient sharp, general p=1",
                general(BoundKind::SubgradSharp, 1.0),
                2.0 * l * l * d0 * d0 / (eps * eps) * log_ld,
            ),
            (
                "subgradient quadratic, general p=2",
                general(BoundKind::SubgradQuadratic, 2.0),
                2.0 * l * l * d0 * d0 / (eps * eps) * log_ld,
            ),
            (
                "subgradient sharp, higher (1,2)",
                higher(BoundKind::SubgradSharp, 1.0, 2.0),
                2.0 * l * l / (alpha * eps) * log_ld,
            ),
        ];
        for (name, bound, want) in expectations {
            let got = bound.evaluate(&params).unwrap_or(f64::NAN);
            let r = rel(got, want);
            worst = worst.max(r);
            t.check(r <= 1e-12, || format!("tuple {i}, {name}: {got} vs {want}"));
        }
        // quadratic prox bound reached by halving the sharp bound
        let halving = BoundKind::ProxQuadFromSharp.evaluate(&params).unwrap_or(f64::NAN);
        let want = 4.0 / (rho * alpha) * (gap0 / eps).ln();
        worst = worst.max(rel(halving, want));
        t.check(rel(halving, want) <= 1e-12, || format!("tuple {i}, quadratic by halving: {halving} vs {want}"));
    }
    format!("100 tuples × 7 identities, worst relative error {worst:e}")
}

fn primal(cuts: &[Cut], center: &[f64], rho: f64, x: &[f64]) -> f64 {
    let model = cuts.iter().map(|c| c.eval(x)).fold(f64::NEG_INFINITY, f64::max);
    let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
    model + 0.5 * rho * d2
}

/// Grid search: scans `±half` steps around the best point, re-centering
/// until it stops moving, then shrinks the step tenfold down to `h_min`.
fn grid_min(f: impl Fn(&[f64]) -> f64, start: &[f64], mut h: f64, h_min: f64, half: i64) -> (Vec<f64>, f64) {
    let n = start.len();
    let side = 2 * half + 1;
    let mut best = start.to_vec();
    let mut best_v = f(&best);
    while h >= h_min {
        loop {
            let base = best.clone();
            for idx in 0..side.pow(n as u32) {
                let mut rem = idx;
                let x: Vec<f64> = base
                    .iter()
                    .map(|b| {
                        let o = rem % side - half;
                        rem /= side;
                        b + o as f64 * h
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

/// Exhaustive active-set enumeration: for each subset of cuts held equal,
/// solve for the multipliers and keep the best primal value.
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

fn subproblem_oracle(t: &mut Tally, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    let (mut worst_arg, mut worst_value, mut worst_recovery) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let n = rng.gen_range(1..=2usize);
        let m = rng.gen_range(1..=3usize);
        let mut vec = |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|_| rng.gen_range(lo..hi)).collect() };
        let raw: Vec<(Vec<f64>, Vec<f64>)> = (0..m).map(|_| (vec(-1.0, 1.0), vec(-2.0, 2.0))).collect();
        let center = vec(-1.0, 1.0);
        let cuts: Vec<Cut> = raw
            .into_iter()
            .map(|(z, g)| {
                let fz = rng.gen_range(-1.0..1.0);
                Cut::new(Point::new(z).expect("finite"), fz, Point::new(g).expect("finite")).expect("finite cut")
            })
            .collect();
        let rho = rng.gen_range(0.2..5.0);
        let Some(sol) = t.ok(solve_multicut_subproblem(&cuts, &center, rho).map_err(Into::into), || {
            format!("instance {i}")
        }) else {
            continue;
        };
        let v_sol = primal(&cuts, &center, rho, &sol.z);

        let reach = cuts.iter().map(|c| c.g.iter().map(|g| g * g).sum::<f64>().sqrt()).fold(0.0, f64::max) / rho;
        let half = if n == 1 { 500 } else { 25 };
        // coarse scan down to step 1e-4, then local refinement
        let (_, v_grid) = grid_min(|x| primal(&cuts, &center, rho, x), &center, (reach + 0.1) / half as f64, 1e-8, half);
        t.check(v_sol <= v_grid + 1e-9, || format!("instance {i}: solver {v_sol} above grid {v_grid}"));

        let (x_enum, v_enum) = enumerate_min(&cuts, &center, rho);
        let arg = x_enum.iter().zip(sol.z.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_arg = worst_arg.max(arg);
        worst_value = worst_value.max((v_sol - v_enum).abs());
        t.check(arg <= 1e-5, || format!("instance {i}: argument error {arg:e}"));
        t.check((v_sol - v_enum).abs() <= 1e-8, || format!("instance {i}: value {v_sol} vs {v_enum}"));

        let recovery = (0..n)
            .map(|d| {
                let combo: f64 = sol.lambda.iter().zip(&cuts).map(|(l, c)| l * c.g[d]).sum();
                (sol.z[d] - (center[d] - combo / rho)).abs()
            })
            .fold(0.0, f64::max);
        worst_recovery = worst_recovery.max(recovery);
        t.check(recovery <= 1e-10, || format!("instance {i}: recovery residual {recovery:e}"));
    }
    format!(
        "50 instances; worst argument error {worst_arg:e}, value error {worst_value:e}, \
         recovery residual {worst_recovery:e}"
    )
}

fn aggregation_identity(t: &mut Tally, seed: u64) -> String {
    let mut worst = 0.0f64;
    let mut steps = 0;
    for (c, trace) in bundle_runs(t, seed) {
        if trace.method != Method::BundleAggregate {
            continue;
        }
        let report = check_aggregation(&trace);
        steps += trace.steps();
        worst = worst.max(report.worst_residual);
        t.check(report.passed, || format!("{}: {}", c.label, report.detail));
    }
    format!("{steps} aggregation steps, worst residual {worst:e} (tolerance 1e-10)")
}

fn bundle_distance(t: &mut Tally, seed: u64) -> String {
    let mut worst = f64::NEG_INFINITY;
    let runs = bundle_runs(t, seed);
    for (c, trace) in &runs {
        let cfg = config(trace.method);
        let report = check_distance(trace, cfg.rho, cfg.beta);
        worst = worst.max(report.worst_residual);
        t.check(report.passed, || format!("{} on {}: {}", trace.method, c.label, report.detail));
    }
    format!("{} runs, worst ‖z_k − x*‖² minus bound {worst:e}", runs.len())
}

fn model_lower_bound(t: &mut Tally, seed: u64) -> String {
    let mut worst = f64::NEG_INFINITY;
    let runs = bundle_runs(t, seed);
    for (i, (c, trace)) in runs.iter().enumerate() {
        let report = check_model_lower_bound(&c.problem, trace, 1000, seed.wrapping_add(i as u64));
        worst = worst.max(report.worst_residual);
        t.check(report.passed, || format!("{} on {}: {}", trace.method, c.label, report.detail));
        let mono = check_incumbent_monotone(trace);
        t.check(mono.passed, || format!("{} on {}: {}", trace.method, c.label, mono.detail));
    }
    format!("{} runs × 1000 samples, worst F̃ − F {worst:e}", runs.len())
}
