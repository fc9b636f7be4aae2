use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::scalar::Real;

/// Affine map `u -> translation + linear * u` on the input space.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<T: Real> {
    linear: DMatrix<T>,
    translation: DVector<T>,
}

impl<T: Real> AffineMap<T> {
    pub fn new(linear: DMatrix<T>, translation: DVector<T>) -> Result<Self> {
        if !linear.is_square() {
            return Err(Error::invalid(format!(
                "linear part must be square, got {}x{}",
                linear.nrows(),
                linear.ncols()
            )));
        }
        check_dim(linear.nrows(), translation.len())?;
        Ok(Self { linear, translation })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            linear: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    /// Map sending every input to `value` (a stuck actuator).
    pub fn constant(value: DVector<T>) -> Self {
        let m = value.len();
        Self {
            linear: DMatrix::zeros(m, m),
            translation: value,
        }
    }

    /// Scalar map `u -> offset + slope * u`.
    pub fn scalar(slope: T, offset: T) -> Self {
        Self {
            linear: DMatrix::from_element(1, 1, slope),
            translation: DVector::from_element(1, offset),
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &DMatrix<T> {
        &self.linear
    }

    pub fn translation(&self) -> &DVector<T> {
        &self.translation
    }

    pub fn apply(&self, u: &DVector<T>) -> Result<DVector<T>> {
        check_dim(self.dim(), u.len())?;
        Ok(&self.translation + &self.linear * u)
    }

    pub fn is_identity(&self, tol: T) -> bool {
        let id = DMatrix::<T>::identity(self.dim(), self.dim());
        (&self.linear - id).amax() <= tol && self.translation.amax() <= tol
    }
}

/// `p + P u`.
pub fn apply_affine<T: Real>(q: &AffineMap<T>, u: &DVector<T>) -> Result<DVector<T>> {
    q.apply(u)
}
