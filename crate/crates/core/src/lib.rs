//! Simulation and analysis of a fractional-order generalized logistic map.
//!
//! The map family is f(x) = μx(1−x) / (1 + rμx(1−x)) iterated through a
//! fractional difference of order 0 < α ≤ 1, which gives every step a
//! weighted memory of the whole past:
//!
//!   x(t) = x(0) + Σ_{j=1..t} c_{t−j}·(f(x(j−1)) − x(j−1)),
//!
//! with Gamma-ratio weights c_n. The crate provides the kernel and trajectory
//! engines (free, delayed-feedback controlled, and master–slave coupled),
//! equilibrium and stability analysis, bifurcation and phase-diagram sweeps,
//! period classification, and the delayed-feedback stability region.
//!
//! Everything is deterministic: no randomness anywhere, identical inputs
//! produce bitwise identical outputs regardless of parallelism.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod frackernel;
pub mod glmap;
pub mod grid;

pub use error::{Error, Result};
