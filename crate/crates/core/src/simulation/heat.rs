//! Finite-difference discretization of the 1-D tissue heat equation with a
//! movable surface source and a needle-depth state.
//!
//! State layout: temperatures `z_0 .. z_{N-1}` on the uniform grid over
//! `[0, 1]`, then the depth `d`. Boundaries are insulated (homogeneous
//! Neumann, mirrored ghost nodes), so with no input the trapezoid-weighted
//! grid integral of temperature is invariant.

use nalgebra::{DMatrix, DVector};

use super::model::ControlAffine;
use crate::error::{check_dim, Error, Result};
use crate::scalar::Real;

/// How the depth state responds to the (degraded) depth command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthCoupling {
    /// `d' = (P u)_2`.
    #[default]
    Linear,
    /// `d' = z(t, 1) (P u)_2`, with `z(t, 1)` the temperature at the far node.
    SurfaceTemperature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatSystem<T: Real> {
    diffusivity: T,
    grid_points: usize,
    epsilon: T,
    coupling: DepthCoupling,
    source: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> HeatSystem<T> {
    pub fn new(diffusivity: T, grid_points: usize, epsilon: T) -> Result<Self> {
        if !(diffusivity > T::zero()) {
            return Err(Error::Configuration("diffusivity must be positive".into()));
        }
        if grid_points < 3 {
            return Err(Error::Configuration("need at least 3 grid points".into()));
        }
        let h = T::one() / T::lit((grid_points - 1) as f64);
        if !(epsilon > T::zero() && epsilon <= T::one()) {
            return Err(Error::Configuration("source width must lie in (0, 1]".into()));
        }
        if epsilon < h {
            return Err(Error::Configuration(format!(
                "source width {} is below the grid spacing {}",
                epsilon.as_f64(),
                h.as_f64()
            )));
        }
        let half = h / T::lit(2.0);
        let mut source = Vec::with_capacity(grid_points);
        let mut weights = Vec::with_capacity(grid_points);
        for i in 0..grid_points {
            let xi = T::lit(i as f64) * h;
            let lo = if i == 0 { T::zero() } else { xi - half };
            let hi = if i + 1 == grid_points { T::one() } else { xi + half };
            let width = hi - lo;
            // Cell average of the indicator of [0, epsilon], scaled by 1/epsilon.
            let overlap = (hi.min(epsilon) - lo).max(T::zero());
            source.push(overlap / (width * epsilon));
            weights.push(width);
        }
        Ok(Self {
            diffusivity,
            grid_points,
            epsilon,
            coupling: DepthCoupling::Linear,
            source,
            weights,
        })
    }

    pub fn with_coupling(mut self, coupling: DepthCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn diffusivity(&self) -> T {
        self.diffusivity
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn coupling(&self) -> DepthCoupling {
        self.coupling
    }

    pub fn spacing(&self) -> T {
        T::one() / T::lit((self.grid_points - 1) as f64)
    }

    /// Discretized source profile `q(xi_i)`.
    pub fn source(&self) -> &[T] {
        &self.source
    }

    /// Trapezoid quadrature weights of the grid.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn initial_state(&self, temperature: T, depth: T) -> DVector<T> {
        let mut x = DVector::from_element(self.grid_points + 1, temperature);
        x[self.grid_points] = depth;
        x
    }

    /// Trapezoid integral of the temperature profile.
    pub fn grid_integral(&self, state: &DVector<T>) -> T {
        self.weights
            .iter()
            .zip(state.iter())
            .fold(T::zero(), |acc, (&w, &z)| acc + w * z)
    }

    /// `a z''` with mirrored ghost nodes at both ends.
    pub fn laplacian(&self, state: &DVector<T>) -> DVector<T> {
        let n = self.grid_points;
        let h = self.spacing();
        let scale = self.diffusivity / (h * h);
        let two = T::lit(2.0);
        DVector::from_fn(n, |i, _| {
            let left = if i == 0 { state[1] } else { state[i - 1] };
            let right = if i + 1 == n { state[n - 2] } else { state[i + 1] };
            scale * (left - two * state[i] + right)
        })
    }

    /// Right-hand side for an already degraded input `v = P u`.
    pub fn heat_rhs(&self, state: &DVector<T>, v: &DVector<T>) -> Result<DVector<T>> {
        check_dim(self.grid_points + 1, state.len())?;
        check_dim(2, v.len())?;
        let mut out = self.drift(state);
        out += self.input_map(state) * v;
        Ok(out)
    }
}

impl<T: Real> ControlAffine<T> for HeatSystem<T> {
    fn state_dim(&self) -> usize {
        self.grid_points + 1
    }

    fn input_dim(&self) -> usize {
        2
    }

    fn drift(&self, x: &DVector<T>) -> DVector<T> {
        let lap = self.laplacian(x);
        let mut out = DVector::zeros(self.grid_points + 1);
        out.rows_mut(0, self.grid_points).copy_from(&lap);
        out
    }

    fn input_map(&self, x: &DVector<T>) -> DMatrix<T> {
        let n = self.grid_points;
        let mut g = DMatrix::zeros(n + 1, 2);
        for (i, &q) in self.source.iter().enumerate() {
            g[(i, 0)] = q;
        }
        g[(n, 1)] = match self.coupling {
            DepthCoupling::Linear => T::one(),
            DepthCoupling::SurfaceTemperature => x[n - 1],
        };
        g
    }

    fn stable_step(&self) -> Option<T> {
        let h = self.spacing();
        Some(h * h / (T::lit(2.0) * self.diffusivity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::model::discretized_pseudo_inverse;
    use approx::assert_relative_eq;

    fn default_system() -> HeatSystem<f64> {
        HeatSystem::new(0.1, 101, 0.05).unwrap()
    }

    #[test]
    fn source_integrates_to_one() {
        let sys = default_system();
        let total: f64 = sys.source().iter().zip(sys.weights()).map(|(q, w)| q * w).sum();
        assert!((total - 1.0).abs() < 0.02);
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_field_has_no_diffusion() {
        let sys = default_system();
        let x = sys.initial_state(3.7, 0.2);
        let rhs = sys.heat_rhs(&x, &DVector::zeros(2)).unwrap();
        assert!(rhs.amax() < 1e-9);
    }

    #[test]
    fn source_node_gains_inverse_width() {
        let sys = default_system();
        let x = sys.initial_state(0.0, 0.0);
        let rhs = sys.heat_rhs(&x, &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_relative_eq!(rhs[2], 1.0 / 0.05, epsilon = 1e-12);
        assert_eq!(rhs[50], 0.0);
    }

    #[test]
    fn quadratic_profile_curvature() {
        let sys = default_system();
        let h = sys.spacing();
        let mut x = sys.initial_state(0.0, 0.0);
        for i in 0..101 {
            x[i] = (i as f64 * h).powi(2);
        }
        let lap = sys.laplacian(&x);
        for i in 1..100 {
            assert!((lap[i] - 0.2).abs() < 1e-8, "row {i}: {}", lap[i]);
        }
    }

    #[test]
    fn second_order_truncation() {
        let err = |n: usize| {
            let sys = HeatSystem::new(1.0, n, 0.5).unwrap();
            let h = sys.spacing();
            let mut x = sys.initial_state(0.0, 0.0);
            for i in 0..n {
                x[i] = (std::f64::consts::PI * i as f64 * h).cos();
            }
            let lap = sys.laplacian(&x);
            (1..n - 1)
                .map(|i| {
                    let xi = i as f64 * h;
                    let exact = -std::f64::consts::PI.powi(2) * (std::f64::consts::PI * xi).cos();
                    (lap[i] - exact).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn input_map_has_left_inverse() {
        let sys = default_system();
        let x = sys.initial_state(1.0, 0.0);
        let g = sys.input_map(&x);
        let gp = discretized_pseudo_inverse(&sys, &x).unwrap();
        assert!((gp * g - DMatrix::identity(2, 2)).amax() < 1e-10);
    }

    #[test]
    fn rejects_unresolvable_source() {
        assert!(matches!(HeatSystem::<f64>::new(0.1, 11, 0.05), Err(Error::Configuration(_))));
        assert!(HeatSystem::<f64>::new(0.0, 11, 0.5).is_err());
    }

    #[test]
    fn surface_coupling_uses_far_temperature() {
        let sys = default_system().with_coupling(DepthCoupling::SurfaceTemperature);
        let mut x = sys.initial_state(0.0, 0.0);
        x[100] = 4.0;
        assert_eq!(sys.input_map(&x)[(101, 1)], 4.0);
    }
}
