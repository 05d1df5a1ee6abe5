//! Experiment harness and command-line front end for `growthlift-core`.
//!
//! * [`harness`] runs a method on a problem and evaluates runtime checks of
//!   per-step convergence inequalities and iteration bounds, plus the
//!   trace-equivalence test between a function and its lifted counterpart.
//! * [`io`] reads problem and bound-parameter files and writes trace CSVs
//!   and JSON reports.
//! * [`acceptance`] is the end-to-end validation suite behind
//!   `growthlift validate`.
//! * [`cli`] implements the `growthlift` binary.

// `!(x < y)` rejects NaN along with the failing comparison
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod acceptance;
pub mod cli;
mod error;
pub mod harness;
pub mod io;

pub use error::{Error, Result};
pub use growthlift_core as core;
