//! Solvers and certificates for sparse, optionally nonnegative, affine
//! feasibility: find `x` with `Ax = b`, `‖x‖₀ ≤ s` and (optionally) `x ≥ 0`,
//! posed as `min ½‖Ax − b‖²` over that set.
//!
//! * [`problem`]: instances, objective, gradient, JSON format.
//! * [`spectral`]: power-iteration estimate of `λ_max(AᵀA)`.
//! * [`projection`]: hard thresholding, nonnegative clamp, their composition.
//! * [`optimality`]: α-, normal- and tangent-cone stationarity, second order.
//! * [`solvers`]: gradient support projection (GSPA), NIHT, CoSaMP, SP.
//! * [`bench`]: seeded instance generation and multi-trial experiments.
//!
//! Indices are 0-based.

pub mod bench;
pub mod error;
mod linalg;
pub mod optimality;
pub mod problem;
pub mod projection;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
pub use problem::{kth_largest, InstanceBuilder, ProblemInstance};
pub use projection::SupportSet;
pub use spectral::{lipschitz_constant, SpectralInfo};
