//! Numerical verification of hyper-CR Einstein–Weyl structures and of the
//! Einstein–Maxwell cosmological space-times built on top of them.
//!
//! Every check is pointwise: fields are evaluated as jets (exact derivatives
//! to a fixed order) at seeded sample points and the residual of the defining
//! equations is compared against a tolerance.

#![allow(clippy::needless_range_loop)]

pub mod curv;
pub mod error;
pub mod ew;
pub mod expr;
pub mod families;
pub mod forms;
pub mod jets;
pub mod lift;
pub mod run;

pub use error::{Error, Result};
