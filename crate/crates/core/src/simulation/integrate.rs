use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::{degraded_rhs, ControlAffine};
use crate::degradation::Cdm;
use crate::error::{check_dim, Error, Result};
use crate::identification::ControlSample;
use crate::scalar::Real;

/// Upper bound on the integrator step, in seconds.
pub const DEFAULT_MAX_STEP: f64 = 1e-3;

/// Jittered sampling times `k / rate + eta_k`, `k = 1 ..= floor(horizon * rate)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingSchedule<T: Real> {
    pub rate: T,
    pub jitter: T,
    pub seed: u64,
    pub horizon: T,
}

impl<T: Real> SamplingSchedule<T> {
    pub fn new(rate: T, jitter: T, seed: u64, horizon: T) -> Result<Self> {
        let schedule = Self { rate, jitter, seed, horizon };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate > T::zero()) {
            return Err(Error::Configuration("sampling rate must be positive".into()));
        }
        if !(self.jitter >= T::zero()) || self.jitter * T::lit(2.0) * self.rate >= T::one() {
            return Err(Error::Configuration(format!(
                "jitter must lie in [0, {}) so samples stay ordered",
                1.0 / (2.0 * self.rate.as_f64())
            )));
        }
        if !(self.horizon >= T::zero()) || !self.horizon.is_finite() {
            return Err(Error::Configuration("horizon must be finite and non-negative".into()));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        // Guard against `10.0 * 20.0` landing a hair under an integer.
        (self.horizon.as_f64() * self.rate.as_f64() + 1e-9).floor() as usize
    }

    pub fn times(&self) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let jitter = self.jitter.as_f64();
        (1..=self.sample_count())
            .map(|k| {
                let eta = if jitter > 0.0 { rng.random_range(-jitter..jitter) } else { 0.0 };
                T::lit(k as f64) / self.rate + T::lit(eta)
            })
            .collect()
    }
}

/// How sampled velocities are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VelocityObservation {
    /// Right-hand side evaluated at the sampled state and input.
    #[default]
    Exact,
    /// Backward difference between consecutive sampled states.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions<T: Real> {
    pub max_step: Option<T>,
    pub velocity: VelocityObservation,
}

impl<T: Real> Default for IntegrationOptions<T> {
    fn default() -> Self {
        Self { max_step: None, velocity: VelocityObservation::Exact }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSignal<T: Real> {
    Constant(T),
    /// `offset + amplitude * cos(2 pi t / period + phase)`.
    Cosine { offset: T, amplitude: T, period: T, phase: T },
}

impl<T: Real> ChannelSignal<T> {
    pub fn eval(&self, t: T) -> T {
        match *self {
            ChannelSignal::Constant(c) => c,
            ChannelSignal::Cosine { offset, amplitude, period, phase } => {
                offset + amplitude * (T::two_pi() * t / period + phase).cos()
            }
        }
    }
}

/// One scalar signal per input channel.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSignal<T: Real> {
    pub channels: Vec<ChannelSignal<T>>,
}

impl<T: Real> InputSignal<T> {
    pub fn new(channels: Vec<ChannelSignal<T>>) -> Self {
        Self { channels }
    }

    /// Unit power with the depth sweeping `(1 - cos(20 pi t / 3)) / 2`.
    pub fn heat_example() -> Self {
        let half = T::lit(0.5);
        Self::new(vec![
            ChannelSignal::Constant(T::one()),
            ChannelSignal::Cosine { offset: half, amplitude: -half, period: T::lit(0.3), phase: T::zero() },
        ])
    }

    pub fn dim(&self) -> usize {
        self.channels.len()
    }

    pub fn eval(&self, t: T) -> DVector<T> {
        DVector::from_iterator(self.channels.len(), self.channels.iter().map(|c| c.eval(t)))
    }
}

/// Integrates the degraded system with classical RK4 and records a sample at
/// every scheduled time.
pub fn integrate<T, S, C>(
    system: &S,
    cdm: &C,
    x0: &DVector<T>,
    signal: &dyn Fn(T) -> DVector<T>,
    schedule: &SamplingSchedule<T>,
    options: &IntegrationOptions<T>,
) -> Result<Vec<ControlSample<T>>>
where
    T: Real,
    S: ControlAffine<T> + ?Sized,
    C: Cdm<T> + ?Sized,
{
    schedule.validate()?;
    check_dim(system.state_dim(), x0.len())?;
    check_dim(system.input_dim(), cdm.input_dim())?;
    let step = step_size(system, options.max_step)?;

    let rhs = |t: T, x: &DVector<T>| degraded_rhs(system, cdm, x, &signal(t));
    let two = T::lit(2.0);
    let six = T::lit(6.0);

    let mut t = T::zero();
    let mut x = x0.clone();
    let mut samples = Vec::with_capacity(schedule.sample_count());
    for tk in schedule.times() {
        let previous = x.clone();
        let t_prev = t;
        let span = tk - t;
        let substeps = (span / step).ceil().to_usize().unwrap_or(0).max(1);
        let dt = span / T::lit(substeps as f64);
        for _ in 0..substeps {
            let half = dt / two;
            let k1 = rhs(t, &x)?;
            let k2 = rhs(t + half, &(&x + &k1 * half))?;
            let k3 = rhs(t + half, &(&x + &k2 * half))?;
            let k4 = rhs(t + dt, &(&x + &k3 * dt))?;
            x += (k1 + (k2 + k3) * two + k4) * (dt / six);
            t += dt;
        }
        t = tk;
        let input = signal(tk);
        check_dim(system.input_dim(), input.len())?;
        let velocity = match options.velocity {
            VelocityObservation::Exact => degraded_rhs(system, cdm, &x, &input)?,
            VelocityObservation::FiniteDifference => (&x - &previous) / (tk - t_prev),
        };
        samples.push(ControlSample { time: tk, state: x.clone(), velocity, input });
    }
    Ok(samples)
}

fn step_size<T: Real, S: ControlAffine<T> + ?Sized>(system: &S, configured: Option<T>) -> Result<T> {
    let cap = T::lit(DEFAULT_MAX_STEP);
    let limit = system.stable_step();
    if let Some(step) = configured {
        if !(step > T::zero()) {
            return Err(Error::Configuration("integration step must be positive".into()));
        }
        if let Some(limit) = limit {
            if step > limit {
                return Err(Error::Configuration(format!(
                    "integration step {} exceeds the stability limit {}",
                    step.as_f64(),
                    limit.as_f64()
                )));
            }
        }
    }
    let mut step = cap;
    for bound in [limit, configured].into_iter().flatten() {
        step = step.min(bound);
    }
    Ok(step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degradation::IdentityCdm;
    use crate::simulation::{HeatSystem, SystemModel};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn heat_signal_period() {
        let sig = InputSignal::<f64>::heat_example();
        assert_relative_eq!(sig.eval(0.0)[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(sig.eval(0.15)[1], 1.0, epsilon = 1e-15);
        assert_relative_eq!(sig.eval(0.3)[1], 0.0, epsilon = 1e-12);
        assert_eq!(sig.eval(0.15)[0], 1.0);
    }

    #[test]
    fn jitter_preserves_count_and_order() {
        let s = SamplingSchedule::new(20.0, 0.01, 7, 1.0).unwrap();
        let times = s.times();
        assert_eq!(times.len(), 20);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        for (k, t) in times.iter().enumerate() {
            assert!((t - (k + 1) as f64 / 20.0).abs() < 0.01);
        }
        assert_eq!(times, s.times());
        assert_eq!(SamplingSchedule::new(20.0, 0.0, 0, 10.0).unwrap().sample_count(), 200);
    }

    #[test]
    fn ordering_invariant_enforced() {
        assert!(SamplingSchedule::new(20.0, 0.025, 0, 1.0).is_err());
        assert!(SamplingSchedule::new(0.0, 0.0, 0, 1.0).is_err());
    }

    #[test]
    fn constant_trajectory_without_drift_or_input() {
        let sys = SystemModel::linear(DMatrix::zeros(2, 2), DMatrix::identity(2, 2)).unwrap();
        let x0 = DVector::from_vec(vec![1.0, -2.0]);
        let schedule = SamplingSchedule::new(10.0, 0.02, 3, 1.0).unwrap();
        let zero = |_t: f64| DVector::zeros(2);
        let out = integrate(&sys, &IdentityCdm { dim: 2 }, &x0, &zero, &schedule, &Default::default()).unwrap();
        assert_eq!(out.len(), 10);
        for s in &out {
            assert_eq!(s.state, x0);
            assert_eq!(s.velocity, DVector::zeros(2));
        }
    }

    #[test]
    fn rk4_matches_exponential() {
        let sys = SystemModel::linear(DMatrix::from_element(1, 1, -1.0), DMatrix::from_element(1, 1, 1.0)).unwrap();
        let schedule = SamplingSchedule::new(1.0, 0.0, 0, 2.0).unwrap();
        let zero = |_t: f64| DVector::zeros(1);
        let out = integrate(&sys, &IdentityCdm { dim: 1 }, &DVector::from_element(1, 1.0), &zero, &schedule, &Default::default()).unwrap();
        assert_relative_eq!(out[1].state[0], (-2.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(out[1].velocity[0], -out[1].state[0]);
    }

    #[test]
    fn finite_difference_velocity() {
        let sys = SystemModel::linear(DMatrix::zeros(1, 1), DMatrix::from_element(1, 1, 1.0)).unwrap();
        let schedule = SamplingSchedule::new(10.0, 0.0, 0, 0.5).unwrap();
        let one = |_t: f64| DVector::from_element(1, 1.0);
        let opts = IntegrationOptions { max_step: None, velocity: VelocityObservation::FiniteDifference };
        let out = integrate(&sys, &IdentityCdm { dim: 1 }, &DVector::zeros(1), &one, &schedule, &opts).unwrap();
        for s in &out {
            assert_relative_eq!(s.velocity[0], 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn unstable_step_is_a_configuration_error() {
        let sys = HeatSystem::new(0.1, 101, 0.05).unwrap();
        let schedule = SamplingSchedule::new(20.0, 0.0, 0, 0.1).unwrap();
        let x0 = sys.initial_state(0.0, 0.0);
        let zero = |_t: f64| DVector::zeros(2);
        let opts = IntegrationOptions { max_step: Some(1e-3), velocity: VelocityObservation::Exact };
        let err = integrate(&sys, &IdentityCdm { dim: 2 }, &x0, &zero, &schedule, &opts).unwrap_err();
        assert!(matches!(err, Error::Configuration(msg) if msg.contains("0.0005")));
    }
}
