//! Forward-mode differentiation substrate: multivariate jets, jet-evaluable
//! fields, chart points, a finite-difference cross-check and point sampling.

mod chart;
mod fd;
mod field;
mod jet;
pub mod linalg;
mod sample;

pub use chart::{Chart, ChartPoint};
pub use fd::{fd_derivative, fd_oracle, FD_STEP, FD_STEP_THIRD};
pub use field::ScalarField;
pub use jet::{coefficient_count, Jet, MAX_DIM, MAX_ORDER};
pub use sample::{sample, Guard, SampleDomain};
