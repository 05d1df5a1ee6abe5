use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{Function, GrowthCertificate, ProblemInstance, RadialNorm, RadialProfile};
use crate::error::{param_err, Error, Result};
use crate::float;
use crate::point::{norm, sub};
use crate::solvers::{solve_multicut_subproblem, Cut};

const KINK_MAX_CUTS: usize = 200;
const KINK_TOL: f64 = 1e-12;

/// `G(x) = max{F(x), F* + c‖x − x*‖ᵖ}` for a base instance `F`.
///
/// `G ≥ F` everywhere, `G = F` wherever `F` is at least the floor, and `G`
/// has Hölder growth with exponent `p` and coefficient `c` by construction.
/// Oracles are transparent: where `F` is at or above the floor the base
/// value and subgradient are returned unchanged.
#[derive(Debug, Clone)]
pub struct LiftedProblem {
    base: ProblemInstance,
    floor: RadialNorm,
}

impl LiftedProblem {
    /// Lifts `base` with floor coefficient `c > 0` and exponent `p ≥ 1`.
    pub fn new(base: ProblemInstance, coefficient: f64, exponent: f64) -> Result<Self> {
        let cert = GrowthCertificate::new(exponent, coefficient)?;
        let floor = RadialNorm {
            center: base.minimizer().clone(),
            f_star: base.min_value(),
            alpha: cert.coefficient,
            p: cert.exponent,
        };
        Ok(Self { base, floor })
    }

    /// The wrapped instance.
    pub fn base(&self) -> &ProblemInstance {
        &self.base
    }

    /// Floor coefficient `c`.
    pub fn coefficient(&self) -> f64 {
        self.floor.alpha
    }

    /// Floor exponent `p`.
    pub fn exponent(&self) -> f64 {
        self.floor.p
    }

    /// Growth certificate `(p, c)` carried by `G`.
    pub fn certificate(&self) -> GrowthCertificate {
        GrowthCertificate {
            exponent: self.floor.p,
            coefficient: self.floor.alpha,
        }
    }

    /// `F* + c‖x − x*‖ᵖ`.
    pub fn floor_value(&self, x: &[f64]) -> f64 {
        self.floor.value(x)
    }

    /// `G(x)`.
    pub fn value(&self, x: &[f64]) -> f64 {
        let fb = self.base.value_raw(x);
        let fl = self.floor.value(x);
        if fb >= fl {
            fb
        } else {
            fl
        }
    }

    /// `G(x)` with the base subgradient unless the floor strictly dominates.
    pub fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let (fb, gb) = self.base.eval_raw(x);
        if fb >= self.floor.value(x) {
            (fb, gb)
        } else {
            self.floor.evaluate(x)
        }
    }

    /// Prox of `G`.
    ///
    /// If the prox of `F` lands where `F` is at least the floor it is also the
    /// prox of `G` (`G ≥ F` with equality there), and symmetrically for the
    /// floor. Otherwise the solution sits on the kink set: radial bases reduce
    /// to a scalar bisection, max-affine bases to a proximal cutting-plane loop
    /// that linearizes the floor.
    pub fn prox(&self, x: &[f64], rho: f64) -> Option<Result<Vec<f64>>> {
        if !self.base.has_prox() {
            return None;
        }
        Some(self.prox_inner(x, rho))
    }

    fn prox_inner(&self, x: &[f64], rho: f64) -> Result<Vec<f64>> {
        let y_base = self.base.prox_raw(x, rho)?;
        if self.base.value_raw(&y_base) >= self.floor.value(&y_base) {
            return Ok(y_base);
        }
        let y_floor = self.floor.prox(x, rho);
        if self.floor.value(&y_floor) >= self.base.value_raw(&y_floor) {
            return Ok(y_floor);
        }
        if let Some((center, _, profile)) = self.radial_profile() {
            let d = sub(x, center);
            let r0 = norm(&d);
            let t = profile.prox_radius(r0, rho);
            return Ok(center.iter().zip(&d).map(|(c, di)| c + di * (t / r0)).collect());
        }
        if let Function::MaxAffine(f) = self.base.function() {
            return self.kink_prox_cutting_plane(f.pieces(), x, rho, [y_base, y_floor]);
        }
        Err(Error::Capability("prox of lifted function on the kink set"))
    }

    fn kink_prox_cutting_plane(&self, pieces: &[Cut], x: &[f64], rho: f64, seeds: [Vec<f64>; 2]) -> Result<Vec<f64>> {
        let mut cuts = pieces.to_vec();
        for y in seeds {
            cuts.push(self.floor_cut(y));
        }
        let mut residual = f64::INFINITY;
        for _ in 0..KINK_MAX_CUTS {
            let sol = solve_multicut_subproblem(&cuts, x, 1.0 / rho)?;
            let y = sol.z.into_vec();
            let gy = self.value(&y);
            residual = gy - sol.model_value;
            if residual <= KINK_TOL * (1.0 + float::abs(gy)) {
                return Ok(y);
            }
            cuts.push(self.floor_cut(y));
        }
        Err(Error::Numerical { residual })
    }

    fn floor_cut(&self, y: Vec<f64>) -> Cut {
        let (fz, g) = self.floor.evaluate(&y);
        Cut::new_unchecked(y, fz, g)
    }

    pub(super) fn radial_profile(&self) -> Option<(&crate::Point, f64, RadialProfile)> {
        let (center, f_star, mut profile) = self.base.function().radial_profile()?;
        if center != &self.floor.center || f_star != self.floor.f_star {
            return None;
        }
        profile.push(self.floor.alpha, self.floor.p);
        Some((center, f_star, profile))
    }

    /// The lifted function as a [`ProblemInstance`] with certificate `(p, c)`.
    pub fn into_problem(self) -> ProblemInstance {
        let radius = self.base.radius();
        let (c, p) = (self.floor.alpha, self.floor.p);
        let floor_slope = if p == 1.0 { c } else { c * p * float::powf(radius, p - 1.0) };
        let lipschitz = self.base.lipschitz().max(floor_slope);
        let minimizer = self.base.minimizer().clone();
        let min_value = self.base.min_value();
        let growth = Some(self.certificate());
        ProblemInstance {
            function: Function::Lifted(Box::new(self)),
            minimizer,
            min_value,
            growth,
            lipschitz,
            radius,
        }
    }
}

/// General lifting: floor coefficient `ε/Dᵖ`.
pub fn lift_general(base: &ProblemInstance, epsilon: f64, diameter: f64, p: f64) -> Result<LiftedProblem> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(param_err("epsilon", "must be positive and finite"));
    }
    if !(diameter > 0.0 && diameter.is_finite()) {
        return Err(param_err("D", "must be positive and finite"));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(param_err("p", "must be a finite value ≥ 1"));
    }
    LiftedProblem::new(base.clone(), epsilon / float::powf(diameter, p), p)
}

/// Higher-order lifting of a base with growth `(q, α)` to exponent `p < q`:
/// floor coefficient `α^{p/q} ε^{1−p/q}`.
pub fn lift_higher(base: &ProblemInstance, epsilon: f64, p: f64) -> Result<LiftedProblem> {
    let cert = base
        .growth()
        .ok_or(Error::State("higher-order lifting needs a growth certificate on the base"))?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(param_err("epsilon", "must be positive and finite"));
    }
    if !(p >= 1.0) {
        return Err(param_err("p", "must be ≥ 1"));
    }
    if p >= cert.exponent {
        return Err(param_err("p", "must be strictly below the base growth exponent q"));
    }
    let ratio = p / cert.exponent;
    let c = float::powf(cert.coefficient, ratio) * float::powf(epsilon, 1.0 - ratio);
    LiftedProblem::new(base.clone(), c, p)
}
