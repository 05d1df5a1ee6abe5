use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::float;
use crate::point::{distance_sq, norm, sub, Point};

const BISECTION_MAX_ITER: usize = 200;
const BISECTION_TOL: f64 = 1e-13;

/// `F(x) = F* + α‖x − c‖ᵖ` with `p ≥ 1`.
///
/// `p = 1` is a sharp cone, `p = 2` a quadratic bowl. The prox is closed form
/// for those two exponents and a scalar bisection otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialNorm {
    /// Minimizer `c`.
    pub center: Point,
    /// Optimal value `F*`.
    pub f_star: f64,
    /// Coefficient `α > 0`.
    pub alpha: f64,
    /// Exponent `p ≥ 1`.
    pub p: f64,
}

impl RadialNorm {
    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Objective value.
    pub fn value(&self, x: &[f64]) -> f64 {
        let r2 = distance_sq(x, &self.center);
        self.f_star + self.alpha * pow_from_sq(r2, self.p)
    }

    /// Value and gradient; the zero vector at the center.
    pub fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let d = sub(x, &self.center);
        let r2: f64 = d.iter().map(|v| v * v).sum();
        let value = self.f_star + self.alpha * pow_from_sq(r2, self.p);
        if r2 == 0.0 {
            return (value, alloc::vec![0.0; d.len()]);
        }
        let scale = if self.p == 2.0 {
            2.0 * self.alpha
        } else if self.p == 1.0 {
            self.alpha / float::sqrt(r2)
        } else {
            self.alpha * self.p * float::powf(float::sqrt(r2), self.p - 2.0)
        };
        (value, d.into_iter().map(|v| scale * v).collect())
    }

    /// `argmin_y F(y) + ‖y − x‖²/(2ρ)`.
    pub fn prox(&self, x: &[f64], rho: f64) -> Vec<f64> {
        let c: &[f64] = &self.center;
        let d = sub(x, c);
        let r0 = norm(&d);
        if r0 == 0.0 {
            return x.to_vec();
        }
        if self.p == 2.0 {
            let shrink = 1.0 + 2.0 * rho * self.alpha;
            return c.iter().zip(&d).map(|(ci, di)| ci + di / shrink).collect();
        }
        if self.p == 1.0 {
            let step = rho * self.alpha;
            // within roundoff of the threshold counts as reaching it
            if r0 - step <= SNAP_ULPS * f64::EPSILON * r0 {
                return c.to_vec();
            }
            // soft threshold along the unit direction
            return x.iter().zip(&d).map(|(xi, di)| xi - step * (di / r0)).collect();
        }
        let t = RadialProfile::single(self.alpha, self.p).prox_radius(r0, rho);
        c.iter().zip(&d).map(|(ci, di)| ci + di * (t / r0)).collect()
    }
}

const SNAP_ULPS: f64 = 16.0;

/// `r^p` computed from `r²`, exact for `p = 2`.
pub(crate) fn pow_from_sq(r2: f64, p: f64) -> f64 {
    if p == 2.0 {
        r2
    } else if p == 1.0 {
        float::sqrt(r2)
    } else {
        float::powf(float::sqrt(r2), p)
    }
}

/// Scalar profile `h(t) = max_i cᵢ tᵉⁱ` of a radial function `F* + h(‖x − x*‖)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    terms: Vec<(f64, f64)>,
}

impl RadialProfile {
    pub(crate) fn single(coef: f64, exp: f64) -> Self {
        Self {
            terms: alloc::vec![(coef, exp)],
        }
    }

    pub(crate) fn push(&mut self, coef: f64, exp: f64) {
        self.terms.push((coef, exp));
    }

    fn term(coef: f64, exp: f64, t: f64) -> f64 {
        if exp == 1.0 {
            coef * t
        } else if exp == 2.0 {
            coef * t * t
        } else {
            coef * float::powf(t, exp)
        }
    }

    fn term_slope(coef: f64, exp: f64, t: f64) -> f64 {
        if exp == 1.0 {
            coef
        } else {
            coef * exp * float::powf(t, exp - 1.0)
        }
    }

    /// `h(t)`.
    pub fn value(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, e)| Self::term(c, e, t))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Right derivative of `h` at `t`.
    pub fn right_slope(&self, t: f64) -> f64 {
        let top = self.value(t);
        self.terms
            .iter()
            .filter(|&&(c, e)| Self::term(c, e, t) == top)
            .map(|&(c, e)| Self::term_slope(c, e, t))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimizer over `t ≥ 0` of `h(t) + (t − r0)²/(2ρ)`.
    ///
    /// Bisection on the nondecreasing right derivative of the objective; the
    /// root is bracketed by `[0, r0]` since `h` is nondecreasing.
    pub fn prox_radius(&self, r0: f64, rho: f64) -> f64 {
        let psi = |t: f64| self.right_slope(t) + (t - r0) / rho;
        if r0 <= 0.0 || psi(0.0) >= 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, r0);
        let tol = BISECTION_TOL * r0.max(1.0);
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if psi(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(alpha: f64, p: f64) -> RadialNorm {
        RadialNorm {
            center: Point::zeros(1),
            f_star: 0.0,
            alpha,
            p,
        }
    }

    #[test]
    fn soft_threshold() {
        let f = cone(1.0, 1.0);
        assert_eq!(f.prox(&[1.0], 0.1), vec![0.9]);
        assert_eq!(f.prox(&[0.05], 0.1), vec![0.0]);
        assert_eq!(f.prox(&[-1.0], 0.1), vec![-0.9]);
    }

    #[test]
    fn quadratic_prox_halves() {
        let f = cone(1.0, 2.0);
        assert_eq!(f.prox(&[1.0], 0.5), vec![0.5]);
    }

    #[test]
    fn kink_subgradient_is_zero() {
        let f = cone(2.0, 1.0);
        assert_eq!(f.evaluate(&[0.0]), (0.0, vec![0.0]));
        assert_eq!(f.evaluate(&[0.5]), (1.0, vec![2.0]));
    }

    #[test]
    fn holder_prox_solves_scalar_condition() {
        // F = |x|³, optimality: 3 t² + (t − r0)/ρ = 0
        let f = cone(1.0, 3.0);
        let rho = 0.7;
        let t = f.prox(&[2.0], rho)[0];
        let residual = 3.0 * t * t + (t - 2.0) / rho;
        assert!(residual.abs() < 1e-11, "residual {residual}");
    }

    #[test]
    fn two_term_profile_lands_on_kink() {
        // h = max{t³, t}: kink at t = 1, prox from r0 = 1.5 with ρ = 0.2
        // left slope at 1 is 1 + (1 − 1.5)/0.2 < 0 and right slope 3 − 2.5 > 0
        let mut h = RadialProfile::single(1.0, 3.0);
        h.push(1.0, 1.0);
        let t = h.prox_radius(1.5, 0.2);
        assert!((t - 1.0).abs() < 1e-12, "t = {t}");
    }
}
