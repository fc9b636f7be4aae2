use nalgebra::DVector;

use super::{AffineMap, Cdm, Region};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{hausdorff_distance, FiniteSetSample, ProbeSet};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CdmMode<T: Real> {
    pub region: Region<T>,
    pub map: AffineMap<T>,
}

/// Internally acting affine modes on pairwise disjoint regions; identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct NModeCdm<T: Real> {
    dim: usize,
    modes: Vec<CdmMode<T>>,
    separation: T,
}

impl<T: Real> NModeCdm<T> {
    pub fn new(dim: usize, modes: Vec<CdmMode<T>>, separation: T) -> Result<Self> {
        if !(separation >= T::zero()) {
            return Err(Error::invalid("mode separation must be non-negative"));
        }
        for m in &modes {
            check_dim(dim, m.map.dim())?;
            if let Some(d) = m.region.dim() {
                check_dim(dim, d)?;
            }
        }
        for (i, a) in modes.iter().enumerate() {
            for (j, b) in modes.iter().enumerate().skip(i + 1) {
                if a.region.intersects(&b.region) {
                    return Err(Error::invalid(format!("mode regions {i} and {j} overlap")));
                }
            }
        }
        Ok(Self {
            dim,
            modes,
            separation,
        })
    }

    pub fn modes(&self) -> &[CdmMode<T>] {
        &self.modes
    }

    pub fn separation(&self) -> T {
        self.separation
    }

    /// Index of the mode whose region contains `u`.
    pub fn mode_of(&self, u: &DVector<T>) -> Option<usize> {
        self.modes.iter().position(|m| m.region.contains(u))
    }

    /// Smallest Hausdorff distance between sampled mode graphs `(u, Q u)`.
    ///
    /// Every region must be bounded. Returns `None` with fewer than two modes.
    pub fn sampled_graph_separation(&self, per_mode: usize, seed: u64) -> Result<Option<T>> {
        let mut graphs = Vec::with_capacity(self.modes.len());
        for (k, m) in self.modes.iter().enumerate() {
            let probes = ProbeSet::sample(&m.region, per_mode, seed.wrapping_add(k as u64))?;
            let pts = probes
                .points()
                .iter()
                .map(|u| {
                    let v = m.map.apply(u)?;
                    Ok(DVector::from_iterator(2 * self.dim, u.iter().chain(v.iter()).copied()))
                })
                .collect::<Result<Vec<_>>>()?;
            graphs.push(FiniteSetSample::new(pts)?);
        }
        let mut best: Option<T> = None;
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                let d = hausdorff_distance(&graphs[i], &graphs[j])?;
                best = Some(match best {
                    Some(b) if b <= d => b,
                    _ => d,
                });
            }
        }
        Ok(best)
    }
}

impl<T: Real> Cdm<T> for NModeCdm<T> {
    fn input_dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        check_dim(self.dim, u.len())?;
        match self.mode_of(u) {
            Some(i) => self.modes[i].map.apply(u),
            None => Ok(u.clone()),
        }
    }
}

pub fn apply_ncdm<T: Real>(cdm: &NModeCdm<T>, u: &DVector<T>) -> Result<DVector<T>> {
    cdm.apply(u)
}
