use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Function, GrowthCertificate, LiftedProblem, MaxAffine, ProblemInstance, RadialNorm};
use crate::error::{param_err, Result};
use crate::float;
use crate::point::Point;

const DEFAULT_RADIUS: f64 = 10.0;

/// Built-in problem families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// `F* + α‖x − x*‖`, growth `(1, α)`.
    SharpNorm,
    /// `F* + α‖x − x*‖²`, growth `(2, α)`.
    QuadraticNorm,
    /// `F* + α‖x − x*‖ᵖ`, growth `(p, α)`.
    HolderNorm,
    /// Random max of `m ≥ 2n` affine pieces, growth `(1, α/√n)`.
    MaxAffine,
    /// `max{α‖x − x*‖^q, c‖x − x*‖ᵖ} + F*`: a Hölder base lifted by a floor,
    /// growth `(p, c)`.
    LiftedHinge,
}

impl ProblemKind {
    /// Snake-case name used in spec files.
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::SharpNorm => "sharp_norm",
            ProblemKind::QuadraticNorm => "quadratic_norm",
            ProblemKind::HolderNorm => "holder_norm",
            ProblemKind::MaxAffine => "max_affine",
            ProblemKind::LiftedHinge => "lifted_hinge",
        }
    }
}

/// Per-kind parameters. Unset fields take their defaults; fields that do not
/// apply to the kind are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemParams {
    /// Growth / slope coefficient `α` (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Hölder exponent of `holder_norm`, floor exponent of `lifted_hinge`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Base exponent of `lifted_hinge` (default 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Floor coefficient of `lifted_hinge` (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Number of pieces of `max_affine` (default `2n + 2`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Optimal value `F*` (default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
    /// Minimizer `x*`; zero for radial kinds and seeded uniform in `[−1, 1]ⁿ`
    /// for `max_affine` when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    /// Radius of the ball around `x*` on which the Lipschitz constant is
    /// reported (default 10).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

/// Problem specification file: `{kind, n, params, seed}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// Family.
    pub kind: ProblemKind,
    /// Dimension.
    pub n: usize,
    /// Family parameters.
    #[serde(default)]
    pub params: ProblemParams,
    /// Seed for randomized families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ProblemSpec {
    /// Builds the instance, using `default_seed` when the spec has none.
    pub fn build(&self, default_seed: u64) -> Result<ProblemInstance> {
        make_builtin(self.kind, self.n, &self.params, self.seed.unwrap_or(default_seed))
    }
}

fn positive(v: Option<f64>, default: f64, field: &'static str) -> Result<f64> {
    let v = v.unwrap_or(default);
    if !(v > 0.0 && v.is_finite()) {
        return Err(param_err(field, "must be positive and finite"));
    }
    Ok(v)
}

fn exponent(v: Option<f64>, default: Option<f64>, field: &'static str) -> Result<f64> {
    let v = v.or(default).ok_or_else(|| param_err(field, "required for this kind"))?;
    if !(v >= 1.0 && v.is_finite()) {
        return Err(param_err(field, "exponent must be a finite value ≥ 1"));
    }
    Ok(v)
}

fn reject(present: bool, field: &'static str, kind: ProblemKind) -> Result<()> {
    if present {
        return Err(param_err(field, alloc::format!("not a parameter of {}", kind.name())));
    }
    Ok(())
}

/// Builds a test function with exact `x*`, `F*`, certificate and `L`.
pub fn make_builtin(kind: ProblemKind, n: usize, params: &ProblemParams, seed: u64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(param_err("n", "dimension must be at least 1"));
    }
    let alpha = positive(params.alpha, 1.0, "alpha")?;
    let radius = positive(params.radius, DEFAULT_RADIUS, "radius")?;
    let f_star = params.f_star.unwrap_or(0.0);
    if !f_star.is_finite() {
        return Err(param_err("f_star", "must be finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = match &params.center {
        Some(c) if c.len() != n => return Err(param_err("center", "length must equal n")),
        Some(c) => Point::new(c.clone()).map_err(|_| param_err("center", "entries must be finite"))?,
        None if kind == ProblemKind::MaxAffine => {
            Point::from_vec_unchecked((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        }
        None => Point::zeros(n),
    };

    reject(params.m.is_some() && kind != ProblemKind::MaxAffine, "m", kind)?;
    reject(params.q.is_some() && kind != ProblemKind::LiftedHinge, "q", kind)?;
    reject(params.c.is_some() && kind != ProblemKind::LiftedHinge, "c", kind)?;
    reject(
        params.p.is_some() && !matches!(kind, ProblemKind::HolderNorm | ProblemKind::LiftedHinge),
        "p",
        kind,
    )?;

    let radial = |p: f64| -> Result<ProblemInstance> {
        let f = RadialNorm {
            center: center.clone(),
            f_star,
            alpha,
            p,
        };
        let lipschitz = if p == 1.0 { alpha } else { alpha * p * float::powf(radius, p - 1.0) };
        ProblemInstance::from_parts(
            Function::Radial(f),
            center.clone(),
            f_star,
            Some(GrowthCertificate::new(p, alpha)?),
            lipschitz,
            radius,
        )
    };

    match kind {
        ProblemKind::SharpNorm => radial(1.0),
        ProblemKind::QuadraticNorm => radial(2.0),
        ProblemKind::HolderNorm => radial(exponent(params.p, None, "p")?),
        ProblemKind::LiftedHinge => {
            let q = exponent(params.q, Some(3.0), "q")?;
            let p = exponent(params.p, Some(1.0), "p")?;
            let c = positive(params.c, 1.0, "c")?;
            Ok(LiftedProblem::new(radial(q)?, c, p)?.into_problem())
        }
        ProblemKind::MaxAffine => {
            let m = params.m.unwrap_or(2 * n + 2);
            let f = MaxAffine::random(center.clone(), f_star, m, alpha, &mut rng)?;
            let lipschitz = f.lipschitz();
            let sharpness = alpha / float::sqrt(n as f64);
            ProblemInstance::from_parts(
                Function::MaxAffine(f),
                center,
                f_star,
                Some(GrowthCertificate::new(1.0, sharpness)?),
                lipschitz,
                radius,
            )
        }
    }
}
