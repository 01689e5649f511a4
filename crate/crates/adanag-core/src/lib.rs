//! Adaptive accelerated first-order methods for smooth convex minimization,
//! their parameter schedules, and runtime Lyapunov certificates.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

extern crate alloc;

pub mod curvature;
pub mod error;
pub mod lyapunov;
pub mod objective;
pub mod schedules;
pub mod solvers;
pub mod vector;

pub use error::{Error, Result};
pub use objective::{evaluate, GradSample, Objective, Optimum};
