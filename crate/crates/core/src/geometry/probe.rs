//! Deterministic quasi-random probing of bounded regions and covering radii.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite_set::FiniteSetSample;
use super::star::{Side, StarSetApprox};
use crate::error::{check_dim, Error, Result};
use crate::linalg::distance_sq;
use crate::scalar::Real;

/// Rejection attempts allowed per requested probe.
const MAX_ATTEMPTS_PER_PROBE: usize = 10_000;

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// A bounded region that can be probed by rejection sampling.
pub trait ProbeRegion<T: Real> {
    fn dim(&self) -> usize;

    /// Axis-aligned box `(lower, upper)` containing the region.
    fn bounding_box(&self) -> Result<(DVector<T>, DVector<T>)>;

    fn contains(&self, u: &DVector<T>) -> bool;
}

impl<T: Real> ProbeRegion<T> for StarSetApprox<T> {
    fn dim(&self) -> usize {
        StarSetApprox::dim(self)
    }

    fn bounding_box(&self) -> Result<(DVector<T>, DVector<T>)> {
        let extent = self
            .extent()
            .ok_or_else(|| Error::invalid("an outer approximation without samples is unbounded"))?;
        let c = self.center();
        Ok((c.add_scalar(-extent), c.add_scalar(extent)))
    }

    fn contains(&self, u: &DVector<T>) -> bool {
        StarSetApprox::contains(self, u)
    }
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// A fixed set of points inside a region.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet<T: Real> {
    points: Vec<DVector<T>>,
}

impl<T: Real> ProbeSet<T> {
    /// Draws `count` points from a Halton sequence over the bounding box,
    /// shifted by a seeded random rotation, keeping those inside the region.
    pub fn sample(region: &impl ProbeRegion<T>, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("probe count must be positive"));
        }
        let dim = region.dim();
        if dim > PRIMES.len() {
            return Err(Error::invalid(format!(
                "probing supports at most {} dimensions",
                PRIMES.len()
            )));
        }
        let (lo, hi) = region.bounding_box()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let lo: Vec<f64> = lo.iter().map(|x| x.as_f64()).collect();
        let hi: Vec<f64> = hi.iter().map(|x| x.as_f64()).collect();

        let mut points = Vec::with_capacity(count);
        let budget = count.saturating_mul(MAX_ATTEMPTS_PER_PROBE);
        let mut index = 1u64;
        while points.len() < count && (index as usize) <= budget {
            let p = DVector::from_fn(dim, |k, _| {
                let h = (radical_inverse(index, PRIMES[k]) + shift[k]).fract();
                T::lit(lo[k] + h * (hi[k] - lo[k]))
            });
            index += 1;
            if region.contains(&p) {
                points.push(p);
            }
        }
        if points.is_empty() {
            return Err(Error::invalid("no probe landed inside the region"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[DVector<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `max_p min_s |p - s|` over probes `p` and the given samples.
    pub fn max_gap<'a>(&self, samples: impl IntoIterator<Item = &'a DVector<T>> + Clone) -> Option<T> {
        let mut worst: Option<T> = None;
        for p in &self.points {
            let best = samples
                .clone()
                .into_iter()
                .map(|s| distance_sq(p.as_slice(), s.as_slice()))
                .fold(None, |acc: Option<T>, d| match acc {
                    Some(a) if a <= d => Some(a),
                    _ => Some(d),
                })?;
            worst = Some(match worst {
                Some(w) if w >= best => w,
                _ => best,
            });
        }
        worst.map(|w| w.sqrt())
    }
}

/// Probe estimate of the smallest `eps` such that `eps`-balls around the
/// samples cover the outer approximation `region`.
///
/// The estimate is a lower bound on the true covering radius and is
/// non-increasing as samples are added with the region and seed fixed.
pub fn covering_radius<T: Real>(
    samples: &FiniteSetSample<T>,
    region: &StarSetApprox<T>,
    probe_count: usize,
    seed: u64,
) -> Result<T> {
    if probe_count == 0 {
        return Err(Error::invalid("probe count must be positive"));
    }
    if region.side() != Side::Outer {
        return Err(Error::invalid("covering radius is taken over an outer approximation"));
    }
    check_dim(region.dim(), samples.dim())?;
    let probes = ProbeSet::sample(region, probe_count, seed)?;
    Ok(probes
        .max_gap(samples.points().iter())
        .expect("probes and samples are non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::star::RadialSample;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    fn unit_interval() -> StarSetApprox<f64> {
        StarSetApprox::with_samples(
            v(&[0.5]),
            0.0,
            Side::Outer,
            [
                RadialSample::new(v(&[1.0]), 0.5).unwrap(),
                RadialSample::new(v(&[-1.0]), 0.5).unwrap(),
            ],
        )
        .unwrap()
    }

    /// Dense-grid oracle for the covering radius of points on [0, 1].
    fn grid_oracle(samples: &[f64]) -> f64 {
        (0..=100_000)
            .map(|i| i as f64 / 100_000.0)
            .map(|x| samples.iter().map(|s| (x - s).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    #[test]
    fn three_points_on_unit_interval() {
        let samples = FiniteSetSample::from_scalars(&[0.0, 0.5, 1.0]).unwrap();
        let oracle = grid_oracle(&[0.0, 0.5, 1.0]);
        assert_relative_eq!(oracle, 0.25, epsilon = 1e-12);
        let eps = covering_radius(&samples, &unit_interval(), 10_000, 3).unwrap();
        assert!((eps - oracle).abs() < 0.01, "{eps}");
        assert!(eps <= oracle + 1e-12);
    }

    #[test]
    fn dense_grid_covers_within_half_spacing() {
        let h = 0.05;
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * h).collect();
        let samples = FiniteSetSample::from_scalars(&grid).unwrap();
        let eps = covering_radius(&samples, &unit_interval(), 10_000, 9).unwrap();
        assert!(eps <= h / 2.0 + 0.01);
    }

    #[test]
    fn ball_center_sample_has_radius_cover() {
        let r = 2.0;
        let ball = StarSetApprox::with_samples(
            v(&[1.0, -1.0]),
            0.0,
            Side::Outer,
            [RadialSample::new(v(&[1.0, 0.0]), r).unwrap()],
        )
        .unwrap();
        let samples = FiniteSetSample::new(vec![v(&[1.0, -1.0])]).unwrap();
        let eps = covering_radius(&samples, &ball, 10_000, 1).unwrap();
        assert!((eps - r).abs() <= 0.01 * r, "{eps}");
        assert!(eps <= r);
    }

    #[test]
    fn deterministic_and_monotone() {
        let region = unit_interval();
        let a = FiniteSetSample::from_scalars(&[0.1, 0.7]).unwrap();
        let b = FiniteSetSample::from_scalars(&[0.1, 0.7, 0.4]).unwrap();
        let ea = covering_radius(&a, &region, 2_000, 5).unwrap();
        assert_eq!(ea, covering_radius(&a, &region, 2_000, 5).unwrap());
        assert!(covering_radius(&b, &region, 2_000, 5).unwrap() <= ea);
    }

    #[test]
    fn zero_probes_rejected() {
        let samples = FiniteSetSample::from_scalars(&[0.0]).unwrap();
        assert!(matches!(
            covering_radius(&samples, &unit_interval(), 0, 1),
            Err(Error::InvalidArgument(_))
        ));
    }
}
