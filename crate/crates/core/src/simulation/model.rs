use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::degradation::{Cdm, Region};
use crate::error::{check_dim, Error, Result};
use crate::linalg::pseudo_inverse;
use crate::scalar::Real;

/// A control-affine system `x' = f(x) + g(x) u`.
pub trait ControlAffine<T: Real>: Send + Sync {
    fn state_dim(&self) -> usize;

    fn input_dim(&self) -> usize;

    fn drift(&self, x: &DVector<T>) -> DVector<T>;

    /// `g(x)` as an `n x m` matrix.
    fn input_map(&self, x: &DVector<T>) -> DMatrix<T>;

    /// Largest explicit step the dynamics tolerate, when there is one.
    fn stable_step(&self) -> Option<T> {
        None
    }
}

type DriftFn<T> = Arc<dyn Fn(&DVector<T>) -> DVector<T> + Send + Sync>;
type InputMapFn<T> = Arc<dyn Fn(&DVector<T>) -> DMatrix<T> + Send + Sync>;

/// Control-affine model given by closures for `f` and `g`.
#[derive(Clone)]
pub struct SystemModel<T: Real> {
    state_dim: usize,
    input_dim: usize,
    drift: DriftFn<T>,
    input_map: InputMapFn<T>,
    input_set: Option<Region<T>>,
}

impl<T: Real> std::fmt::Debug for SystemModel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SystemModel")
            .field("state_dim", &self.state_dim)
            .field("input_dim", &self.input_dim)
            .field("input_set", &self.input_set)
            .finish_non_exhaustive()
    }
}

impl<T: Real> SystemModel<T> {
    pub fn new(
        state_dim: usize,
        input_dim: usize,
        drift: impl Fn(&DVector<T>) -> DVector<T> + Send + Sync + 'static,
        input_map: impl Fn(&DVector<T>) -> DMatrix<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        if input_dim == 0 || input_dim > state_dim {
            return Err(Error::invalid(format!(
                "need 0 < m <= n, got n = {state_dim}, m = {input_dim}"
            )));
        }
        Ok(Self {
            state_dim,
            input_dim,
            drift: Arc::new(drift),
            input_map: Arc::new(input_map),
            input_set: None,
        })
    }

    /// `x' = A x + B u`.
    pub fn linear(a: DMatrix<T>, b: DMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::invalid("drift matrix must be square"));
        }
        check_dim(a.nrows(), b.nrows())?;
        let (n, m) = (b.nrows(), b.ncols());
        Self::new(n, m, move |x| &a * x, move |_| b.clone())
    }

    pub fn with_input_set(mut self, set: Region<T>) -> Self {
        self.input_set = Some(set);
        self
    }

    pub fn input_set(&self) -> Option<&Region<T>> {
        self.input_set.as_ref()
    }
}

impl<T: Real> ControlAffine<T> for SystemModel<T> {
    fn state_dim(&self) -> usize {
        self.state_dim
    }

    fn input_dim(&self) -> usize {
        self.input_dim
    }

    fn drift(&self, x: &DVector<T>) -> DVector<T> {
        (self.drift)(x)
    }

    fn input_map(&self, x: &DVector<T>) -> DMatrix<T> {
        (self.input_map)(x)
    }
}

/// `f(x) + g(x) P(u)`.
pub fn degraded_rhs<T: Real>(
    model: &(impl ControlAffine<T> + ?Sized),
    cdm: &(impl Cdm<T> + ?Sized),
    x: &DVector<T>,
    u: &DVector<T>,
) -> Result<DVector<T>> {
    check_dim(model.state_dim(), x.len())?;
    check_dim(model.input_dim(), u.len())?;
    check_dim(model.input_dim(), cdm.input_dim())?;
    let v = cdm.apply(u)?;
    Ok(model.drift(x) + model.input_map(x) * v)
}

/// `g(x)^+`, the left inverse of a full-column-rank input map.
pub fn discretized_pseudo_inverse<T: Real>(
    model: &(impl ControlAffine<T> + ?Sized),
    x: &DVector<T>,
) -> Result<DMatrix<T>> {
    check_dim(model.state_dim(), x.len())?;
    pseudo_inverse(&model.input_map(x))
}
