//! Closed-form iteration bounds. Every count logarithm `ln(x)` with `x ≤ 1`
//! evaluates to zero; structural logarithms are left untouched.

use crate::error::Result;
use crate::float::{ln, ln_1p, ln_pos};

use super::BoundParams;

/// Proximal point under quadratic growth:
/// `ln(gap0/ε) / ln(1 + αρ/2)`.
pub fn k_prox_quadratic(p: &BoundParams) -> Result<f64> {
    let (alpha, rho, eps, gap0) = (p.get("alpha")?, p.get("rho")?, p.get("epsilon")?, p.get("gap0")?);
    Ok(ln_pos(gap0 / eps) / ln_1p(alpha * rho / 2.0))
}

/// Proximal point under sharp growth: `2·gap0/(ρα²)`.
pub fn k_prox_sharp(p: &BoundParams) -> Result<f64> {
    let (alpha, rho, gap0) = (p.get("alpha")?, p.get("rho")?, p.get("gap0")?);
    Ok(2.0 * gap0 / (rho * alpha * alpha))
}

/// Proximal point, general convex, by gap halving: `16·D0²/(ρε)`.
pub fn k_prox_general_halving(p: &BoundParams) -> Result<f64> {
    let (d0, rho, eps) = (p.get("dist0")?, p.get("rho")?, p.get("epsilon")?);
    Ok(16.0 * d0 * d0 / (rho * eps))
}

/// Proximal point under quadratic growth, by halving the sharp bound:
/// `(4/(ρα))·ln(gap0/ε)`.
pub fn k_prox_quad_from_sharp(p: &BoundParams) -> Result<f64> {
    let (alpha, rho, eps, gap0) = (p.get("alpha")?, p.get("rho")?, p.get("epsilon")?, p.get("gap0")?);
    Ok(4.0 / (rho * alpha) * ln_pos(gap0 / eps))
}

/// Polyak subgradient under quadratic growth: `(2L²/(αε))·ln(L·D0/ε)`.
pub fn k_subgrad_quadratic(p: &BoundParams) -> Result<f64> {
    let (l, alpha, eps, d0) = (p.get("L")?, p.get("alpha")?, p.get("epsilon")?, p.get("dist0")?);
    Ok(2.0 * l * l / (alpha * eps) * ln_pos(l * d0 / eps))
}

/// Polyak subgradient under sharp growth: `(2L²/α²)·ln(L·D0/ε)`.
pub fn k_subgrad_sharp(p: &BoundParams) -> Result<f64> {
    let (l, alpha, eps, d0) = (p.get("L")?, p.get("alpha")?, p.get("epsilon")?, p.get("dist0")?);
    Ok(2.0 * l * l / (alpha * alpha) * ln_pos(l * d0 / eps))
}

/// Bundle method under quadratic growth, simplified form, evaluated at
/// `ε_stop = ᾱε`:
///
/// `A·ln(L²/(2ρε_s)) + ln(gap0/(βε_s))·[A/(βᾱ)·ln(9/(2ᾱ²β²)) + 2/(ᾱβ)] + 2`
/// with `A = 8L²/(ρ(1−β)²ε_s)`.
pub fn k_bundle_quadratic(p: &BoundParams) -> Result<f64> {
    let (l, rho, beta, eps, gap0) = (p.get("L")?, p.get("rho")?, p.get("beta")?, p.get("epsilon")?, p.get("gap0")?);
    let ab = p.alpha_bar()?;
    let es = ab * eps;
    let a = 8.0 * l * l / (rho * (1.0 - beta) * (1.0 - beta) * es);
    let bracket = a / (beta * ab) * ln(9.0 / (2.0 * ab * ab * beta * beta)) + 2.0 / (ab * beta);
    Ok(a * ln_pos(l * l / (2.0 * rho * es)) + ln_pos(gap0 / (beta * es)) * bracket + 2.0)
}

/// Bundle method, general convex: [`k_bundle_quadratic`] with `α = ε/D²`.
pub fn k_bundle_general(p: &BoundParams) -> Result<f64> {
    let (eps, d) = (p.get("epsilon")?, p.get("D")?);
    let mut q = *p;
    q.alpha = Some(eps / (d * d));
    k_bundle_quadratic(&q)
}

/// Bundle method under quadratic growth, original form with `η₀` and `M`,
/// evaluated at `ε_stop = ᾱε`:
///
/// `B·ln((F0 − η₀)/ε_s) + ln(gap0/(βε_s))/ln(1 − ᾱβ)·[B·ln(2ᾱ²β²/9) − 2] + 2`
/// with `B = 2M/((1−β)²ε_s)`. `M` defaults to `4L²/ρ`; `F0 − η₀` defaults to
/// its upper bound `L²/(2ρ)` unless both `f0` and `eta0` are given.
pub fn k_bundle_quadratic_full(p: &BoundParams) -> Result<f64> {
    let (rho, beta, eps, gap0) = (p.get("rho")?, p.get("beta")?, p.get("epsilon")?, p.get("gap0")?);
    let ab = p.alpha_bar()?;
    let es = ab * eps;
    let m = match p.m {
        Some(_) => p.get("M")?,
        None => {
            let l = p.get("L")?;
            4.0 * l * l / rho
        }
    };
    let head = match (p.f0, p.eta0) {
        (Some(_), Some(_)) => p.get("f0")? - p.get("eta0")?,
        _ => {
            let l = p.get("L")?;
            l * l / (2.0 * rho)
        }
    };
    let b = 2.0 * m / ((1.0 - beta) * (1.0 - beta) * es);
    let tail = ln_pos(gap0 / (beta * es)) / ln(1.0 - ab * beta) * (b * ln(2.0 * ab * ab * beta * beta / 9.0) - 2.0);
    Ok(b * ln_pos(head / es) + tail + 2.0)
}
