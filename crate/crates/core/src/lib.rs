//! Nonsmooth convex minimization with certified growth bounds.
//!
//! The crate provides four first-order methods (proximal point, subgradient
//! with the Polyak stepsize, and the proximal bundle method with multiple cuts
//! or with cut aggregation), a small library of convex test functions whose
//! minimizer, optimal value and Hölder growth constants are known by
//! construction, the closed-form iteration bounds for those methods, and the
//! two rate-lifting transforms:
//!
//! * general lifting: a bound `K(x0, ε, α)` proven under growth
//!   `F(x) ≥ F* + α‖x − x*‖ᵖ` becomes the unconditional bound
//!   `K(x0, ε, ε/Dᵖ)` for a method whose iterates stay within `D` of `x*`;
//! * higher-order lifting: a bound for exponent `p` yields one for any
//!   exponent `q > p` via `α ↦ α^{p/q} ε^{1−p/q}`.
//!
//! Both rest on the auxiliary function `G(x) = max{F(x), F* + c‖x − x*‖ᵖ}`,
//! available as [`problems::LiftedProblem`]. A solver run on `F` and on `G`
//! produces the same iterates until an ε-minimizer is reached, which the
//! companion `growthlift` crate checks empirically.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]
// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bounds;
mod error;
mod float;
mod point;
pub mod problems;
pub mod solvers;

pub use error::{Error, Result};
pub use point::Point;
