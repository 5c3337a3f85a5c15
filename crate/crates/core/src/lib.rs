//! Simulation and verification of heavy-tailed càdlàg processes and their
//! α-stable functional limits.
//!
//! The crate is `no_std` and only needs `alloc`. Everything random is driven by
//! explicit [`rng::Stream`] handles, so results depend only on seeds.
//!
//! * [`cadlag`]: exact step-function algebra, moduli and Skorokhod distances.
//! * [`tail`], [`stable`], [`special`]: heavy-tailed scalar laws, stable laws
//!   and analytic constants.
//! * [`spectral`]: unit-norm spectral path samplers.
//! * [`models`]: partial sums, Pareto processes, LePage series, exceedance
//!   point processes, truncated sums and renewal–reward processes.
//! * [`verify`]: statistical checks of simulated samples against the limits.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cadlag;
pub mod error;
pub mod models;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod stable;
pub mod tail;
pub mod verify;

pub use cadlag::{Interval, PathEnsemble, StepFunction, VectorStepFunction};
pub use error::{Error, Result};
pub use rng::RngSeed;
pub use stable::StableParams;
pub use tail::{TailKind, TailModel};
