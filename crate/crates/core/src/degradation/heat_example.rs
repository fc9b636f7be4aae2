//! The three-region needle-depth degradation of the electrosurgery testbed.
//!
//! The depth command `p = u_2` is remapped piecewise:
//!
//! ```text
//! P12(p) = 0.25 + 3p   for p < 0.25    (charred layer)
//!          p           for 0.25 <= p <= 0.75   (pristine tissue)
//!          2.5 - 2p    for p > 0.75    (vascularized layer)
//! ```
//!
//! The power channel `u_1` passes through unchanged. The declared regions
//! `[0, 0.25]`, `[0.5, 0.75]`, `[0.75, 1]` are carried as metadata only; the
//! formula above is what the simulator applies.

use std::ops::Bound;

use nalgebra::DVector;

use super::{AffineMap, AxisBox, Cdm, CdmMode, NModeCdm, Region};
use crate::error::{check_dim, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct HeatExampleCdm<T: Real> {
    depth_map: NModeCdm<T>,
    declared_regions: Vec<AxisBox<T>>,
}

impl<T: Real> HeatExampleCdm<T> {
    /// Scalar map acting on the depth command.
    pub fn depth_map(&self) -> &NModeCdm<T> {
        &self.depth_map
    }

    pub fn declared_regions(&self) -> &[AxisBox<T>] {
        &self.declared_regions
    }

    /// Regions on which the formula is affine: below, between and above the
    /// breakpoints, restricted to the admissible depth range `[0, 1]`.
    pub fn formula_regions(&self) -> Vec<AxisBox<T>> {
        let lit = T::lit;
        vec![
            AxisBox::interval(Bound::Included(lit(0.0)), Bound::Excluded(lit(0.25))),
            AxisBox::interval(Bound::Included(lit(0.25)), Bound::Included(lit(0.75))),
            AxisBox::interval(Bound::Excluded(lit(0.75)), Bound::Included(lit(1.0))),
        ]
        .into_iter()
        .map(|b| b.expect("static bounds are ordered"))
        .collect()
    }
}

pub fn heat_example_cdm<T: Real>() -> HeatExampleCdm<T> {
    let lit = T::lit;
    let charred = AxisBox::interval(Bound::Unbounded, Bound::Excluded(lit(0.25))).expect("valid");
    let vascular = AxisBox::interval(Bound::Excluded(lit(0.75)), Bound::Unbounded).expect("valid");
    let depth_map = NModeCdm::new(
        1,
        vec![
            CdmMode {
                region: Region::Box(charred),
                map: AffineMap::scalar(lit(3.0), lit(0.25)),
            },
            CdmMode {
                region: Region::Box(vascular),
                map: AffineMap::scalar(lit(-2.0), lit(2.5)),
            },
        ],
        T::zero(),
    )
    .expect("heat example modes are disjoint");
    let declared_regions = [(0.0, 0.25), (0.5, 0.75), (0.75, 1.0)]
        .iter()
        .map(|&(a, b)| AxisBox::closed(&[lit(a)], &[lit(b)]).expect("valid"))
        .collect();
    HeatExampleCdm {
        depth_map,
        declared_regions,
    }
}

impl<T: Real> Cdm<T> for HeatExampleCdm<T> {
    fn input_dim(&self) -> usize {
        2
    }

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        check_dim(2, u.len())?;
        let depth = self.depth_map.apply(&DVector::from_element(1, u[1]))?;
        Ok(DVector::from_vec(vec![u[0], depth[0]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degradation::apply_ncdm;
    use approx::assert_relative_eq;

    fn p12(p: f64) -> f64 {
        apply_ncdm(heat_example_cdm::<f64>().depth_map(), &DVector::from_element(1, p)).unwrap()[0]
    }

    #[test]
    fn branch_values() {
        assert_relative_eq!(p12(0.1), 0.55, epsilon = 1e-15);
        assert_eq!(p12(0.5), 0.5);
        assert_relative_eq!(p12(0.9), 0.7, epsilon = 1e-15);
        assert_eq!(p12(0.0), 0.25);
        assert_eq!(p12(1.0), 0.5);
    }

    #[test]
    fn outer_branches_reach_one_at_breakpoints() {
        let below = AffineMap::scalar(3.0, 0.25);
        let above = AffineMap::scalar(-2.0, 2.5);
        assert_eq!(below.apply(&DVector::from_element(1, 0.25)).unwrap()[0], 1.0);
        assert_eq!(above.apply(&DVector::from_element(1, 0.75)).unwrap()[0], 1.0);
        assert!((p12(0.25 - 1e-12) - 1.0).abs() < 1e-10);
        assert!((p12(0.75 + 1e-12) - 1.0).abs() < 1e-10);
        // Breakpoints themselves belong to the identity branch.
        assert_eq!(p12(0.25), 0.25);
        assert_eq!(p12(0.75), 0.75);
    }

    #[test]
    fn power_channel_passes_through() {
        let cdm = heat_example_cdm::<f64>();
        let out = cdm.apply(&DVector::from_vec(vec![1.0, 0.1])).unwrap();
        assert_eq!(out[0], 1.0);
        assert_relative_eq!(out[1], 0.55, epsilon = 1e-15);
        assert_eq!(cdm.declared_regions().len(), 3);
    }
}
