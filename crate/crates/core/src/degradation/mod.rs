//! Ground-truth control authority degradation maps (CDMs).
//!
//! These are the maps the simulator applies to commanded inputs and the
//! oracles the identification tests compare against.

mod affine;
mod heat_example;
mod lipschitz;
mod ncdm;
mod partial;
mod region;

use nalgebra::DVector;

use crate::error::Result;
use crate::scalar::Real;

pub use affine::{apply_affine, AffineMap};
pub use heat_example::{heat_example_cdm, HeatExampleCdm};
pub use lipschitz::LipschitzCdm;
pub use ncdm::{apply_ncdm, CdmMode, NModeCdm};
pub use partial::{apply_partial, Acting, PartialCdm};
pub use region::{AxisBox, Region};

/// A map remapping commanded inputs before they reach the input map.
pub trait Cdm<T: Real>: Send + Sync {
    fn input_dim(&self) -> usize;

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>>;
}

/// The undegraded map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityCdm {
    pub dim: usize,
}

impl<T: Real> Cdm<T> for IdentityCdm {
    fn input_dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        crate::error::check_dim(self.dim, u.len())?;
        Ok(u.clone())
    }
}

impl<T: Real> Cdm<T> for AffineMap<T> {
    fn input_dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        AffineMap::apply(self, u)
    }
}
