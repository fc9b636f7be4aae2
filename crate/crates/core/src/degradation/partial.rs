use nalgebra::DVector;

use super::{AffineMap, Cdm, Region};
use crate::error::{check_dim, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acting {
    /// Degrades inputs inside the affected set.
    Internal,
    /// Degrades inputs outside the affected set.
    External,
}

/// Single-mode degradation acting only inside or only outside a set.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialCdm<T: Real> {
    pub base: AffineMap<T>,
    pub affected: Region<T>,
    pub acting: Acting,
}

impl<T: Real> PartialCdm<T> {
    pub fn new(base: AffineMap<T>, affected: Region<T>, acting: Acting) -> Result<Self> {
        if let Some(d) = affected.dim() {
            check_dim(base.dim(), d)?;
        }
        Ok(Self {
            base,
            affected,
            acting,
        })
    }

    fn active(&self, u: &DVector<T>) -> bool {
        let inside = self.affected.contains(u);
        match self.acting {
            Acting::Internal => inside,
            Acting::External => !inside,
        }
    }
}

impl<T: Real> Cdm<T> for PartialCdm<T> {
    fn input_dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        check_dim(self.base.dim(), u.len())?;
        if self.active(u) {
            self.base.apply(u)
        } else {
            Ok(u.clone())
        }
    }
}

/// `u + [u in U]·(Q u - u)` (internal) or `u + [u not in U]·(Q u - u)` (external).
pub fn apply_partial<T: Real>(pc: &PartialCdm<T>, u: &DVector<T>) -> Result<DVector<T>> {
    pc.apply(u)
}
