//! Identification of control authority degradation maps (CDMs).
//!
//! A control-affine plant `x' = f(x) + g(x) u` may receive a degraded input
//! `P(u)` instead of the commanded `u`. From exact observations of state,
//! velocity and command this crate recovers the effective inputs, groups
//! them into affine degradation modes, brackets each mode's input region
//! between inner and outer star-shaped approximations, and computes commands
//! that undo the degradation where it is certified.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod degradation;
pub mod error;
pub mod geometry;
pub mod identification;
pub mod linalg;
pub mod scalar;
pub mod simulation;

pub use error::{Error, Result};
pub use scalar::Real;

pub type FiniteSetSample64 = geometry::FiniteSetSample<f64>;
pub type StarSetApprox64 = geometry::StarSetApprox<f64>;
pub type AffineMap64 = degradation::AffineMap<f64>;
pub type NModeCdm64 = degradation::NModeCdm<f64>;
pub type ControlSample64 = identification::ControlSample<f64>;
pub type EffectivePair64 = identification::EffectivePair<f64>;
pub type CdmReconstruction64 = identification::CdmReconstruction<f64>;
pub type IdentificationConfig64 = identification::IdentificationConfig<f64>;
pub type SystemModel64 = simulation::SystemModel<f64>;
pub type HeatSystem64 = simulation::HeatSystem<f64>;

pub type StarSetApprox32 = geometry::StarSetApprox<f32>;
pub type AffineMap32 = degradation::AffineMap<f32>;
pub type CdmReconstruction32 = identification::CdmReconstruction<f32>;
