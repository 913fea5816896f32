//! Performance characterization and simulation of noisy sparse recovery via
//! ℓ1 minimization under a second-order-cone constraint.
//!
//! * [`theory`]: large-n predictions (weak thresholds, error and objective
//!   concentration points, optimal radius, ρ-contours);
//! * [`genie`]: the finite-n genie-aided dual problem;
//! * [`socp`]: ADMM and reference solvers for the SOCP itself;
//! * [`experiments`]: Monte Carlo drivers and the published-table harness.
//!
//! Numerical code is generic over [`Scalar`] (`f32`/`f64`); the aliases
//! below fix it to `f64`.

// `!(x > 0)` is the NaN-rejecting form used throughout for input checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod genie;
pub mod linalg;
pub mod roots;
pub mod sampling;
pub mod scalar;
pub mod socp;
pub mod special;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Regime = theory::RecoveryRegime<f64>;
pub type Prediction = theory::TheoryPoint<f64>;
pub type Coefficients = theory::ScalarCoefficients<f64>;
pub type Matrix = linalg::DenseMatrix<f64>;
pub type GenieData = genie::SortedDualData<f64>;
pub type GenieResult = genie::GenieSolution<f64>;
pub type Solution = socp::SocpSolution<f64>;
pub type Diagnostics = socp::OptimalityDiagnostics<f64>;
