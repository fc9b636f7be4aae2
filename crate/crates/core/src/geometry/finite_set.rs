//! Distances between finitely sampled sets.

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::linalg::distance_sq;
use crate::scalar::Real;

/// A non-empty finite set of points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSetSample<T: Real> {
    points: Vec<DVector<T>>,
}

impl<T: Real> FiniteSetSample<T> {
    pub fn new(points: Vec<DVector<T>>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("finite set sample must not be empty"))?;
        let dim = first.len();
        for p in &points {
            check_dim(dim, p.len())?;
        }
        Ok(Self { points })
    }

    /// Convenience constructor for one-dimensional sets.
    pub fn from_scalars(values: &[T]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| DVector::from_element(1, v))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[DVector<T>] {
        &self.points
    }

    pub fn push(&mut self, p: DVector<T>) -> Result<()> {
        check_dim(self.dim(), p.len())?;
        self.points.push(p);
        Ok(())
    }
}

/// Directed distance `sup_{a in A} inf_{b in B} |a - b|`.
pub fn set_distance<T: Real>(a: &FiniteSetSample<T>, b: &FiniteSetSample<T>) -> Result<T> {
    check_dim(a.dim(), b.dim())?;
    Ok(directed_sq(a.points(), b.points()).sqrt())
}

pub(crate) fn directed_sq<T: Real>(a: &[DVector<T>], b: &[DVector<T>]) -> T {
    let mut worst = T::zero();
    for p in a {
        let mut best: Option<T> = None;
        for q in b {
            let d = distance_sq(p.as_slice(), q.as_slice());
            best = Some(match best {
                Some(cur) if cur <= d => cur,
                _ => d,
            });
            if best == Some(T::zero()) {
                break;
            }
        }
        if let Some(d) = best {
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

pub fn hausdorff_distance<T: Real>(a: &FiniteSetSample<T>, b: &FiniteSetSample<T>) -> Result<T> {
    let ab = set_distance(a, b)?;
    let ba = set_distance(b, a)?;
    Ok(if ab > ba { ab } else { ba })
}

/// Whether `A` lies in the `rho`-fattening of `B` and vice versa.
pub fn within_fattening<T: Real>(
    a: &FiniteSetSample<T>,
    b: &FiniteSetSample<T>,
    rho: T,
) -> Result<bool> {
    if rho < T::zero() {
        return Err(Error::invalid("fattening radius must be non-negative"));
    }
    Ok(hausdorff_distance(a, b)? <= rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[[f64; 2]]) -> FiniteSetSample<f64> {
        FiniteSetSample::new(v.iter().map(|p| DVector::from_row_slice(p)).collect()).unwrap()
    }

    fn scalars(v: &[f64]) -> FiniteSetSample<f64> {
        FiniteSetSample::from_scalars(v).unwrap()
    }

    /// Brute-force oracle over all pairs, written independently of `directed_sq`.
    fn oracle_directed(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .map(|x| b.iter().map(|y| (x - y).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    #[test]
    fn set_distance_examples() {
        assert_eq!(set_distance(&pts(&[[0.0, 0.0]]), &pts(&[[0.0, 0.0]])).unwrap(), 0.0);
        assert_eq!(set_distance(&pts(&[[0.0, 0.0]]), &pts(&[[3.0, 4.0]])).unwrap(), 5.0);
        let expected = oracle_directed(&[0.0, 1.0, 2.0], &[0.0, 1.0]);
        assert_eq!(expected, 1.0);
        assert_eq!(
            set_distance(&scalars(&[0.0, 1.0, 2.0]), &scalars(&[0.0, 1.0])).unwrap(),
            expected
        );
    }

    #[test]
    fn hausdorff_examples() {
        let a = scalars(&[0.3, -1.0, 4.0]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&scalars(&[0.0]), &scalars(&[0.0, 1.0])).unwrap(), 1.0);
        assert_eq!(hausdorff_distance(&scalars(&[0.0, 2.0]), &scalars(&[1.0])).unwrap(), 1.0);
    }

    #[test]
    fn fattening_examples() {
        let a = scalars(&[0.0]);
        let b = scalars(&[1.0]);
        assert!(within_fattening(&a, &a, 0.0).unwrap());
        assert!(!within_fattening(&a, &b, 0.5).unwrap());
        assert!(within_fattening(&a, &b, 1.0).unwrap());
        assert!(matches!(
            within_fattening(&a, &b, -0.1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rejects_empty_and_mixed_dimensions() {
        assert!(matches!(
            FiniteSetSample::<f64>::new(vec![]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(FiniteSetSample::new(vec![DVector::from_vec(vec![0.0]), DVector::from_vec(vec![0.0, 1.0])]).is_err());
        assert!(set_distance(&scalars(&[0.0]), &pts(&[[0.0, 0.0]])).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let a = FiniteSetSample::<f32>::from_scalars(&[0.0, 2.0]).unwrap();
        let b = FiniteSetSample::<f32>::from_scalars(&[1.0]).unwrap();
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 1.0f32);
    }
}
