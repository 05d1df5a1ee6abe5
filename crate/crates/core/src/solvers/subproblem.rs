//! Proximal cutting-plane subproblems
//! `min_x max_j ℓ_j(x) + (ρ/2)‖x − x_c‖²`.
//!
//! The multicut problem is solved through its dual over the simplex,
//! `max_{λ∈Δ} Σ λ_j ℓ_j(x_c) − ‖Σ λ_j g_j‖²/(2ρ)`, with primal recovery
//! `z = x_c − (1/ρ) Σ λ_j g_j`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{param_err, Error, Result};
use crate::float;
use crate::point::{dot, norm_sq, Point};

/// Affine minorant `ℓ(x) = F(z) + ⟨g, x − z⟩` built from an oracle call at `z`.
///
/// Also used for aggregate planes, which are convex combinations of cuts
/// re-anchored at an arbitrary point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    /// Anchor point `z_j`.
    pub z: Point,
    /// `F(z_j)`.
    pub fz: f64,
    /// Subgradient `g_j ∈ ∂F(z_j)`.
    pub g: Point,
}

impl Cut {
    /// Checked constructor.
    pub fn new(z: Point, fz: f64, g: Point) -> Result<Self> {
        if z.dim() != g.dim() {
            return Err(Error::Dimension {
                expected: z.dim(),
                actual: g.dim(),
            });
        }
        if !fz.is_finite() {
            return Err(param_err("fz", "cut value must be finite"));
        }
        Ok(Self { z, fz, g })
    }

    pub(crate) fn new_unchecked(z: Vec<f64>, fz: f64, g: Vec<f64>) -> Self {
        Self {
            z: Point::from_vec_unchecked(z),
            fz,
            g: Point::from_vec_unchecked(g),
        }
    }

    /// `ℓ(x)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.fz
            + self
                .g
                .iter()
                .zip(x.iter().zip(self.z.iter()))
                .map(|(g, (x, z))| g * (x - z))
                .sum::<f64>()
    }

    /// `θ·a + (1 − θ)·b` as an affine function anchored at `anchor`.
    pub fn combine(theta: f64, a: &Cut, b: &Cut, anchor: &[f64]) -> Cut {
        let fz = theta * a.eval(anchor) + (1.0 - theta) * b.eval(anchor);
        Cut::new_unchecked(anchor.to_vec(), fz, combine_gradients(theta, &a.g, &b.g))
    }
}

/// `θ·ga + (1 − θ)·gb`
pub(crate) fn combine_gradients(theta: f64, ga: &[f64], gb: &[f64]) -> Vec<f64> {
    ga.iter().zip(gb).map(|(a, b)| theta * a + (1.0 - theta) * b).collect()
}

/// Solution of the multicut subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    /// Primal minimizer.
    pub z: Point,
    /// Dual weights on the cuts, in the simplex.
    pub lambda: Vec<f64>,
    /// Model value `max_j ℓ_j(z)`.
    pub model_value: f64,
}

/// Solution of the two-cut (aggregation) subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCutSolution {
    /// Primal minimizer.
    pub z: Point,
    /// Dual weight on the aggregate plane.
    pub theta: f64,
    /// Model value `max{ℓ_new(z), ℓ_agg(z)}`.
    pub model_value: f64,
}

const ACTIVE_SET_GAP: f64 = 1e-10;
const FALLBACK_GAP: f64 = 1e-9;
const FALLBACK_MAX_ITER: usize = 200_000;
const DEPENDENCE_TOL: f64 = 1e-11;

struct Dual<'a> {
    a: Vec<f64>,
    g: Vec<&'a [f64]>,
    rho: f64,
}

impl<'a> Dual<'a> {
    fn new(cuts: &'a [Cut], center: &[f64], rho: f64) -> Result<Self> {
        if cuts.is_empty() {
            return Err(param_err("cuts", "at least one cut is required"));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(param_err("rho", "must be positive and finite"));
        }
        for c in cuts {
            if c.g.dim() != center.len() || c.z.dim() != center.len() {
                return Err(Error::Dimension {
                    expected: center.len(),
                    actual: c.g.dim(),
                });
            }
        }
        Ok(Self {
            a: cuts.iter().map(|c| c.eval(center)).collect(),
            g: cuts.iter().map(|c| &c.g[..]).collect(),
            rho,
        })
    }

    fn m(&self) -> usize {
        self.a.len()
    }

    fn dim(&self) -> usize {
        self.g[0].len()
    }

    /// `Σ λ_j g_j`
    fn combo(&self, lambda: &[f64]) -> Vec<f64> {
        let mut y = alloc::vec![0.0; self.dim()];
        for (l, g) in lambda.iter().zip(&self.g) {
            if *l != 0.0 {
                for (yi, gi) in y.iter_mut().zip(g.iter()) {
                    *yi += l * gi;
                }
            }
        }
        y
    }

    /// `ℓ_j(x_c − y/ρ)` for all `j`.
    fn cut_values(&self, y: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.g)
            .map(|(a, g)| a - dot(g, y) / self.rho)
            .collect()
    }

    fn scale(&self) -> f64 {
        let gmax = self.g.iter().map(|g| norm_sq(g)).fold(0.0, f64::max);
        let amax = self.a.iter().map(|a| float::abs(*a)).fold(0.0, f64::max);
        1.0 + amax + gmax / self.rho
    }

    fn finish(&self, cuts: &[Cut], center: &[f64], lambda: Vec<f64>) -> (SubproblemSolution, f64) {
        let y = self.combo(&lambda);
        let z: Vec<f64> = center.iter().zip(&y).map(|(c, yi)| c - yi / self.rho).collect();
        let vals: Vec<f64> = cuts.iter().map(|c| c.eval(&z)).collect();
        let model_value = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weighted: f64 = lambda.iter().zip(&vals).map(|(l, v)| l * v).sum();
        let gap = model_value - weighted;
        (
            SubproblemSolution {
                z: Point::from_vec_unchecked(z),
                lambda,
                model_value,
            },
            gap,
        )
    }
}

/// Orthonormal basis of `{g_s − g_{s0}}` for an affinely independent active set.
struct FaceBasis {
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl FaceBasis {
    fn build(dual: &Dual<'_>, active: &[usize]) -> Option<Self> {
        let mut basis = FaceBasis {
            q: Vec::new(),
            r: Vec::new(),
        };
        let g0 = dual.g[active[0]];
        for &s in &active[1..] {
            let w: Vec<f64> = dual.g[s].iter().zip(g0).map(|(a, b)| a - b).collect();
            let (coef, resid, rnorm) = basis.project(&w);
            if rnorm <= DEPENDENCE_TOL * (1.0 + float::sqrt(norm_sq(&w))) {
                return None;
            }
            let k = basis.q.len();
            for (i, row) in basis.r.iter_mut().enumerate() {
                row.push(coef[i]);
            }
            let mut row = alloc::vec![0.0; k + 1];
            row[k] = rnorm;
            basis.r.push(row);
            basis.q.push(resid.into_iter().map(|v| v / rnorm).collect());
        }
        Some(basis)
    }

    /// Coefficients on `q`, residual, and residual norm; Gram-Schmidt twice.
    fn project(&self, w: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        let mut resid = w.to_vec();
        let mut coef = alloc::vec![0.0; self.q.len()];
        for _ in 0..2 {
            for (c, q) in coef.iter_mut().zip(&self.q) {
                let h = dot(q, &resid);
                *c += h;
                for (ri, qi) in resid.iter_mut().zip(q) {
                    *ri -= h * qi;
                }
            }
        }
        let rnorm = float::sqrt(norm_sq(&resid));
        (coef, resid, rnorm)
    }

    /// Solves `R x = b`.
    fn back_solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.q.len();
        let mut x = alloc::vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = b[i];
            for j in i + 1..k {
                s -= self.r[i][j] * x[j];
            }
            x[i] = s / self.r[i][i];
        }
        x
    }

    /// Solves `Rᵀ x = b`.
    fn forward_solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.q.len();
        let mut x = alloc::vec![0.0; k];
        for i in 0..k {
            let mut s = b[i];
            for j in 0..i {
                s -= self.r[j][i] * x[j];
            }
            x[i] = s / self.r[i][i];
        }
        x
    }
}

/// Minimizer of the dual objective on the affine hull of the active face.
fn face_minimizer(dual: &Dual<'_>, active: &[usize]) -> Option<Vec<f64>> {
    if active.len() == 1 {
        return Some(alloc::vec![1.0]);
    }
    let basis = FaceBasis::build(dual, active)?;
    let s0 = active[0];
    let delta_a: Vec<f64> = active[1..].iter().map(|&s| dual.rho * (dual.a[s] - dual.a[s0])).collect();
    let u = basis.forward_solve(&delta_a);
    let w: Vec<f64> = basis.q.iter().map(|q| dot(q, dual.g[s0])).collect();
    let rhs: Vec<f64> = u.iter().zip(&w).map(|(u, w)| u - w).collect();
    let beta = basis.back_solve(&rhs);
    let mut out = Vec::with_capacity(active.len());
    out.push(1.0 - beta.iter().sum::<f64>());
    out.extend(beta);
    if out.iter().all(|v| v.is_finite()) {
        Some(out)
    } else {
        None
    }
}

/// If `g_j` lies in the affine hull of the active gradients, the affine
/// coefficients (summing to one) expressing it.
fn affine_dependence(dual: &Dual<'_>, active: &[usize], j: usize) -> Option<Vec<f64>> {
    let basis = FaceBasis::build(dual, active)?;
    let g0 = dual.g[active[0]];
    let w: Vec<f64> = dual.g[j].iter().zip(g0).map(|(a, b)| a - b).collect();
    let (coef, _, rnorm) = basis.project(&w);
    if rnorm > DEPENDENCE_TOL * (1.0 + float::sqrt(norm_sq(&w))) {
        return None;
    }
    let beta = basis.back_solve(&coef);
    let mut out = Vec::with_capacity(active.len());
    out.push(1.0 - beta.iter().sum::<f64>());
    out.extend(beta);
    Some(out)
}

/// Primal active-set method on the simplex-constrained dual. Keeps the active
/// gradients affinely independent so every face problem is nonsingular.
fn active_set(dual: &Dual<'_>) -> Option<Vec<f64>> {
    let m = dual.m();
    let vertex_value = |j: usize| dual.a[j] - norm_sq(dual.g[j]) / (2.0 * dual.rho);
    let mut j0 = 0;
    for j in 1..m {
        if vertex_value(j) > vertex_value(j0) {
            j0 = j;
        }
    }
    let mut lambda = alloc::vec![0.0; m];
    lambda[j0] = 1.0;
    let mut active = alloc::vec![j0];
    let tol = 1e-14 * dual.scale();

    for _ in 0..(100 + 20 * m) {
        let y = dual.combo(&lambda);
        let vals = dual.cut_values(&y);
        let v: f64 = active.iter().map(|&s| lambda[s] * vals[s]).sum();
        let mut entering = None;
        let mut worst = tol;
        for j in 0..m {
            if !active.contains(&j) && vals[j] - v > worst {
                worst = vals[j] - v;
                entering = Some(j);
            }
        }
        let Some(j) = entering else {
            return Some(lambda);
        };

        if let Some(coef) = affine_dependence(dual, &active, j) {
            // the dual is linear along e_j − coef: move until a weight vanishes
            let mut step = f64::INFINITY;
            let mut leaving = None;
            for (k, &s) in active.iter().enumerate() {
                if coef[k] > 0.0 {
                    let t = lambda[s] / coef[k];
                    if t < step {
                        step = t;
                        leaving = Some(k);
                    }
                }
            }
            let leaving = leaving?;
            for (k, &s) in active.iter().enumerate() {
                lambda[s] -= step * coef[k];
            }
            lambda[active[leaving]] = 0.0;
            lambda[j] = step;
            active.remove(leaving);
        }
        active.push(j);

        // face minimization with ratio test
        let mut inner = 0;
        loop {
            inner += 1;
            if inner > m + 2 {
                return None;
            }
            let star = face_minimizer(dual, &active)?;
            if star.iter().all(|&v| v >= 0.0) {
                for (k, &s) in active.iter().enumerate() {
                    lambda[s] = star[k];
                }
                break;
            }
            let mut step = 1.0;
            let mut leaving = 0;
            for (k, &s) in active.iter().enumerate() {
                if star[k] < 0.0 {
                    let t = lambda[s] / (lambda[s] - star[k]);
                    if t < step {
                        step = t;
                        leaving = k;
                    }
                }
            }
            for (k, &s) in active.iter().enumerate() {
                lambda[s] += step * (star[k] - lambda[s]);
            }
            lambda[active[leaving]] = 0.0;
            active.remove(leaving);
            if active.is_empty() {
                return None;
            }
        }
    }
    None
}

fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, s) in sorted.iter().enumerate() {
        cum += s;
        let t = (cum - 1.0) / (i as f64 + 1.0);
        if *s - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
}

/// Accelerated projected gradient on the dual; returns weights and the
/// final primal-dual gap.
fn projected_gradient(dual: &Dual<'_>, max_iter: usize, tol: f64) -> (Vec<f64>, f64) {
    let m = dual.m();
    let lip: f64 = dual.g.iter().map(|g| norm_sq(g)).sum::<f64>() / dual.rho;
    let gap_of = |lambda: &[f64]| {
        let vals = dual.cut_values(&dual.combo(lambda));
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top - lambda.iter().zip(&vals).map(|(l, v)| l * v).sum::<f64>()
    };
    let mut lambda = alloc::vec![1.0 / m as f64; m];
    if lip == 0.0 {
        // linear dual: best vertex
        let j = (0..m).fold(0, |b, j| if dual.a[j] > dual.a[b] { j } else { b });
        lambda.iter_mut().for_each(|l| *l = 0.0);
        lambda[j] = 1.0;
        return (lambda.clone(), gap_of(&lambda));
    }
    let step = 1.0 / lip;
    let mut w = lambda.clone();
    let mut t = 1.0;
    let mut gap = gap_of(&lambda);
    for it in 0..max_iter {
        let y = dual.combo(&w);
        let mut next: Vec<f64> = (0..m)
            .map(|j| w[j] - step * (dot(dual.g[j], &y) / dual.rho - dual.a[j]))
            .collect();
        project_simplex(&mut next);
        let t_next = 0.5 * (1.0 + float::sqrt(1.0 + 4.0 * t * t));
        let mom = (t - 1.0) / t_next;
        w = next.iter().zip(&lambda).map(|(n, l)| n + mom * (n - l)).collect();
        lambda = next;
        t = t_next;
        if it % 16 == 0 {
            gap = gap_of(&lambda);
            if gap <= tol {
                break;
            }
        }
    }
    gap = gap.min(gap_of(&lambda));
    (lambda, gap)
}

/// Exact solution of the multicut subproblem via the dual active-set method,
/// falling back to projected gradient when the active set stalls.
pub fn solve_multicut_subproblem(cuts: &[Cut], center: &[f64], rho: f64) -> Result<SubproblemSolution> {
    let dual = Dual::new(cuts, center, rho)?;
    let scale = dual.scale();
    if let Some(lambda) = active_set(&dual) {
        let (sol, gap) = dual.finish(cuts, center, lambda);
        if gap <= ACTIVE_SET_GAP * scale {
            return Ok(sol);
        }
    }
    let (lambda, _) = projected_gradient(&dual, FALLBACK_MAX_ITER, 1e-12 * scale);
    let (sol, gap) = dual.finish(cuts, center, lambda);
    if gap <= FALLBACK_GAP * scale {
        Ok(sol)
    } else {
        Err(Error::Numerical { residual: gap })
    }
}

/// Projected-gradient solve of the multicut subproblem. Slower and less exact
/// than [`solve_multicut_subproblem`]; kept as an independent cross-check.
pub fn solve_multicut_projected_gradient(
    cuts: &[Cut],
    center: &[f64],
    rho: f64,
    max_iter: usize,
    tol: f64,
) -> Result<SubproblemSolution> {
    let dual = Dual::new(cuts, center, rho)?;
    let (lambda, gap) = projected_gradient(&dual, max_iter, tol);
    let (sol, _) = dual.finish(cuts, center, lambda);
    if gap <= tol {
        Ok(sol)
    } else {
        Err(Error::Numerical { residual: gap })
    }
}

/// Closed-form solve of `min max{ℓ_new, ℓ_agg} + (ρ/2)‖x − x_c‖²`.
///
/// The dual is a concave quadratic in the weight `θ` on the aggregate plane,
/// maximized in closed form and clamped to `[0, 1]`. Without an aggregate
/// (the `−∞` plane of the first iteration), or when the dual is flat, `θ = 0`.
pub fn solve_two_cut_subproblem(
    newest: &Cut,
    aggregate: Option<&Cut>,
    center: &[f64],
    rho: f64,
) -> Result<TwoCutSolution> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(param_err("rho", "must be positive and finite"));
    }
    if newest.g.dim() != center.len() {
        return Err(Error::Dimension {
            expected: center.len(),
            actual: newest.g.dim(),
        });
    }
    let theta = match aggregate {
        None => 0.0,
        Some(agg) => {
            if agg.g.dim() != center.len() {
                return Err(Error::Dimension {
                    expected: center.len(),
                    actual: agg.g.dim(),
                });
            }
            let a_new = newest.eval(center);
            let a_agg = agg.eval(center);
            let d: Vec<f64> = agg.g.iter().zip(newest.g.iter()).map(|(a, b)| a - b).collect();
            let dd = norm_sq(&d);
            if dd == 0.0 {
                if a_agg > a_new {
                    1.0
                } else {
                    0.0
                }
            } else {
                ((rho * (a_agg - a_new) - dot(&d, &newest.g)) / dd).clamp(0.0, 1.0)
            }
        }
    };
    let combo = match aggregate {
        Some(agg) => combine_gradients(theta, &agg.g, &newest.g),
        None => newest.g.to_vec(),
    };
    let z: Vec<f64> = center.iter().zip(&combo).map(|(c, g)| c - g / rho).collect();
    let mut model_value = newest.eval(&z);
    if let Some(agg) = aggregate {
        model_value = model_value.max(agg.eval(&z));
    }
    Ok(TwoCutSolution {
        z: Point::from_vec_unchecked(z),
        theta,
        model_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut(z: &[f64], fz: f64, g: &[f64]) -> Cut {
        Cut::new(Point::new(z.to_vec()).unwrap(), fz, Point::new(g.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn single_cut_is_gradient_step() {
        let c = cut(&[0.0, 0.0], 0.0, &[1.0, -2.0]);
        let sol = solve_multicut_subproblem(&[c], &[0.0, 0.0], 2.0).unwrap();
        assert_eq!(sol.z.to_vec(), vec![-0.5, 1.0]);
        assert_eq!(sol.lambda, vec![1.0]);
    }

    #[test]
    fn absolute_value_kink() {
        // |x| + ½(x − 1)² is minimized at 0 with all weight on ℓ(x) = x
        let cuts = [cut(&[0.0], 0.0, &[1.0]), cut(&[0.0], 0.0, &[-1.0])];
        let sol = solve_multicut_subproblem(&cuts, &[1.0], 1.0).unwrap();
        assert!(sol.z[0].abs() < 1e-15);
        assert!((sol.lambda[0] - 1.0).abs() < 1e-15 && sol.lambda[1].abs() < 1e-15);
        assert!(sol.model_value.abs() < 1e-15);
    }

    #[test]
    fn duplicate_cuts_are_handled() {
        let cuts = [
            cut(&[0.0, 0.0], 0.0, &[1.0, 0.0]),
            cut(&[1.0, 0.0], 1.0, &[1.0, 0.0]),
            cut(&[0.0, 0.0], 0.0, &[-1.0, 0.5]),
            cut(&[0.0, 0.0], -0.25, &[-1.0, 0.5]),
        ];
        let sol = solve_multicut_subproblem(&cuts, &[0.3, 0.2], 1.5).unwrap();
        let pg = solve_multicut_projected_gradient(&cuts, &[0.3, 0.2], 1.5, 500_000, 1e-13).unwrap();
        for (a, b) in sol.z.iter().zip(pg.z.iter()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!((sol.lambda.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lower_cut_gets_no_weight() {
        let cuts = [cut(&[0.0], 0.0, &[1.0]), cut(&[0.0], -5.0, &[0.0])];
        let sol = solve_multicut_subproblem(&cuts, &[2.0], 1.0).unwrap();
        assert_eq!(sol.lambda, vec![1.0, 0.0]);
        assert_eq!(sol.z.to_vec(), vec![1.0]);
    }

    #[test]
    fn two_cut_sentinel_and_tie() {
        let new = cut(&[1.0], 1.0, &[1.0]);
        let sol = solve_two_cut_subproblem(&new, None, &[1.0], 1.0).unwrap();
        assert_eq!((sol.theta, sol.z.to_vec()), (0.0, vec![0.0]));
        let same = new.clone();
        let sol = solve_two_cut_subproblem(&new, Some(&same), &[1.0], 1.0).unwrap();
        assert_eq!((sol.theta, sol.z.to_vec()), (0.0, vec![0.0]));
    }

    #[test]
    fn two_cut_matches_multicut() {
        let new = cut(&[0.2, -0.1], 0.4, &[0.7, -1.2]);
        let agg = cut(&[-0.5, 0.3], 0.1, &[-0.9, 0.4]);
        let center = [0.1, 0.1];
        let two = solve_two_cut_subproblem(&new, Some(&agg), &center, 0.8).unwrap();
        let multi = solve_multicut_subproblem(&[new, agg], &center, 0.8).unwrap();
        assert!((two.theta - multi.lambda[1]).abs() < 1e-12);
        for (a, b) in two.z.iter().zip(multi.z.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_multicut_subproblem(&[], &[0.0], 1.0).is_err());
        let c = cut(&[0.0], 0.0, &[1.0]);
        assert!(solve_multicut_subproblem(std::slice::from_ref(&c), &[0.0], 0.0).is_err());
        assert!(solve_multicut_subproblem(&[c], &[0.0, 1.0], 1.0).is_err());
    }
}
