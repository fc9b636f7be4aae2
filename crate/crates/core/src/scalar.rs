use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar the whole toolkit is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances in this crate are written as
/// `f64` literals and converted with [`Real::lit`].
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance used when checking that a vector has unit length.
    fn unit_tolerance() -> Self {
        let eps = Self::default_epsilon();
        let floor = Self::lit(1e-12);
        let scaled = eps * Self::lit(1e3);
        if scaled > floor {
            scaled
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_tolerance_tracks_precision() {
        assert_eq!(f64::unit_tolerance(), 1e-12);
        assert!(f32::unit_tolerance() > 1e-5);
    }
}
