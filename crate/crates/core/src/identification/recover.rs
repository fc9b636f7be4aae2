use nalgebra::DVector;

use super::sample::{ControlSample, EffectivePair};
use crate::error::{check_dim, Result};
use crate::linalg::least_squares;
use crate::scalar::Real;
use crate::simulation::ControlAffine;

/// `v = g(x)^+ (x' - f(x))`, the input that actually reached the plant.
pub fn recover_effective_input<T: Real>(
    sample: &ControlSample<T>,
    model: &(impl ControlAffine<T> + ?Sized),
) -> Result<DVector<T>> {
    check_dim(model.state_dim(), sample.state.len())?;
    check_dim(model.state_dim(), sample.velocity.len())?;
    check_dim(model.input_dim(), sample.input.len())?;
    let rhs = &sample.velocity - model.drift(&sample.state);
    least_squares(&model.input_map(&sample.state), &rhs)
}

/// Recovers every sample, optionally keeping only some input channels.
pub fn recover_pairs<T: Real>(
    samples: &[ControlSample<T>],
    model: &(impl ControlAffine<T> + ?Sized),
    channels: Option<&[usize]>,
) -> Result<Vec<EffectivePair<T>>> {
    samples
        .iter()
        .map(|s| {
            let pair = EffectivePair::new(s.input.clone(), recover_effective_input(s, model)?)?;
            match channels {
                Some(c) => pair.project(c),
                None => Ok(pair),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::simulation::SystemModel;
    use nalgebra::DMatrix;

    fn scalar(x: f64) -> DVector<f64> {
        DVector::from_element(1, x)
    }

    fn system() -> SystemModel<f64> {
        SystemModel::linear(DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, 2.0)).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let sys = system();
        let x = 0.7;
        let u = 0.4;
        let plain = ControlSample::new(0.0, scalar(x), scalar(x + 2.0 * u), scalar(u)).unwrap();
        assert!((recover_effective_input(&plain, &sys).unwrap()[0] - u).abs() < 1e-15);
        let tripled = ControlSample::new(0.0, scalar(x), scalar(x + 6.0 * u), scalar(u)).unwrap();
        assert!((recover_effective_input(&tripled, &sys).unwrap()[0] - 3.0 * u).abs() < 1e-15);
        let zero = ControlSample::new(0.0, scalar(x), scalar(x), scalar(0.0)).unwrap();
        assert_eq!(recover_effective_input(&zero, &sys).unwrap()[0], 0.0);
    }

    #[test]
    fn rank_deficiency_reports_rank() {
        let sys = SystemModel::linear(DMatrix::zeros(2, 2), DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0])).unwrap();
        let s = ControlSample::new(0.0, DVector::zeros(2), DVector::zeros(2), DVector::zeros(2)).unwrap();
        assert!(matches!(recover_effective_input(&s, &sys), Err(Error::RankDeficient { rank: 1, .. })));
    }
}
