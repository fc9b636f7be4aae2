use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Cdm;
use crate::error::{check_dim, Error, Result};
use crate::scalar::Real;

/// A CDM known only through evaluations and a declared Lipschitz constant.
#[derive(Clone)]
pub struct LipschitzCdm<T: Real> {
    map: Arc<dyn Cdm<T>>,
    lipschitz: T,
}

impl<T: Real> std::fmt::Debug for LipschitzCdm<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LipschitzCdm")
            .field("dim", &self.map.input_dim())
            .field("lipschitz", &self.lipschitz.as_f64())
            .finish()
    }
}

impl<T: Real> LipschitzCdm<T> {
    pub fn new(map: Arc<dyn Cdm<T>>, lipschitz: T) -> Result<Self> {
        if !(lipschitz > T::zero()) {
            return Err(Error::invalid("CDM Lipschitz constant must be positive"));
        }
        Ok(Self { map, lipschitz })
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    /// Largest difference quotient over `pairs` random input pairs drawn
    /// uniformly from the box `[lower, upper]`.
    pub fn max_difference_quotient(
        &self,
        lower: &[T],
        upper: &[T],
        pairs: usize,
        seed: u64,
    ) -> Result<T> {
        let m = self.map.input_dim();
        check_dim(m, lower.len())?;
        check_dim(m, upper.len())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            DVector::from_fn(m, |k, _| lower[k] + T::lit(rng.random::<f64>()) * (upper[k] - lower[k]))
        };
        let mut worst = T::zero();
        for _ in 0..pairs {
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let du = (&a - &b).norm();
            if du <= T::zero() {
                continue;
            }
            let dv = (self.map.apply(&a)? - self.map.apply(&b)?).norm();
            let q = dv / du;
            if q > worst {
                worst = q;
            }
        }
        Ok(worst)
    }
}

impl<T: Real> Cdm<T> for LipschitzCdm<T> {
    fn input_dim(&self) -> usize {
        self.map.input_dim()
    }

    fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        self.map.apply(u)
    }
}
