//! Star-shaped sets described by sampled Minkowski gauge function (MGF) values.
//!
//! A star-shaped set `K` with center `c` is the union of segments
//! `[c, c + rho(l) l]` over unit directions `l`. When `rho` is `L`-Lipschitz
//! on the unit sphere, each observed pair `(l_i, r_i)` constrains `rho` to a
//! cone around `l_i`:
//!
//! * an observed member `u` with `r_i = |u - c|` gives `rho(l) >= r_i - L |l - l_i|`;
//! * an observed non-member gives `rho(l) <= r_i + L |l - l_i|`.
//!
//! An [`Side::Inner`] approximation takes the largest of the lower cones and
//! an [`Side::Outer`] approximation the smallest of the upper cones. Adding a
//! sample can only raise the inner bound and lower the outer bound.

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::linalg::distance;
use crate::scalar::Real;

/// Directions closer than this are treated as the same direction.
pub const DIRECTION_DEDUP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Inner,
    Outer,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Inner => "inner",
            Side::Outer => "outer",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inner" => Ok(Side::Inner),
            "outer" => Ok(Side::Outer),
            other => Err(Error::invalid(format!("unknown star-set side {other:?}"))),
        }
    }
}

/// One observed `(direction, radius)` pair about the star center.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSample<T: Real> {
    pub direction: DVector<T>,
    pub radius: T,
}

impl<T: Real> RadialSample<T> {
    pub fn new(direction: DVector<T>, radius: T) -> Result<Self> {
        let norm = direction.norm();
        if (norm - T::one()).abs() > T::unit_tolerance() {
            return Err(Error::invalid(format!(
                "sample direction must have unit norm, got {}",
                norm.as_f64()
            )));
        }
        if !(radius >= T::zero()) {
            return Err(Error::invalid("sample radius must be non-negative"));
        }
        Ok(Self { direction, radius })
    }

    /// The pair `((u - c)/|u - c|, |u - c|)`; `None` when `u == c`.
    pub fn about(center: &DVector<T>, u: &DVector<T>) -> Option<Self> {
        let offset = u - center;
        let radius = offset.norm();
        if radius <= T::zero() {
            return None;
        }
        Some(Self {
            direction: offset / radius,
            radius,
        })
    }
}

/// Result of testing a point against an inner/outer pair of approximations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    InsideInner,
    OutsideOuter,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarSetApprox<T: Real> {
    center: DVector<T>,
    lipschitz: T,
    samples: Vec<RadialSample<T>>,
    side: Side,
}

impl<T: Real> StarSetApprox<T> {
    pub fn new(center: DVector<T>, lipschitz: T, side: Side) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("star center must have positive dimension"));
        }
        if !(lipschitz >= T::zero()) {
            return Err(Error::invalid("MGF Lipschitz constant must be non-negative"));
        }
        Ok(Self {
            center,
            lipschitz,
            samples: Vec::new(),
            side,
        })
    }

    pub fn with_samples(
        center: DVector<T>,
        lipschitz: T,
        side: Side,
        samples: impl IntoIterator<Item = RadialSample<T>>,
    ) -> Result<Self> {
        let mut set = Self::new(center, lipschitz, side)?;
        for s in samples {
            set.insert(s)?;
        }
        Ok(set)
    }

    /// Builds an approximation whose witnesses are the given points.
    pub fn from_points<'a>(
        center: DVector<T>,
        lipschitz: T,
        side: Side,
        points: impl IntoIterator<Item = &'a DVector<T>>,
    ) -> Result<Self> {
        let mut set = Self::new(center, lipschitz, side)?;
        for p in points {
            set.insert_point(p)?;
        }
        Ok(set)
    }

    pub fn center(&self) -> &DVector<T> {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn samples(&self) -> &[RadialSample<T>] {
        &self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Adds a radial sample. Duplicate directions keep the larger radius on
    /// inner sets and the smaller one on outer sets.
    pub fn insert(&mut self, sample: RadialSample<T>) -> Result<()> {
        check_dim(self.dim(), sample.direction.len())?;
        let sample = RadialSample::new(sample.direction, sample.radius)?;
        let tol = T::lit(DIRECTION_DEDUP_TOLERANCE);
        if let Some(existing) = self.samples.iter_mut().find(|s| {
            distance(s.direction.as_slice(), sample.direction.as_slice()) <= tol
        }) {
            let replace = match self.side {
                Side::Inner => sample.radius > existing.radius,
                Side::Outer => sample.radius < existing.radius,
            };
            if replace {
                existing.radius = sample.radius;
            }
            return Ok(());
        }
        self.samples.push(sample);
        Ok(())
    }

    /// Adds the witness `u`; returns `false` when `u` coincides with the center.
    pub fn insert_point(&mut self, u: &DVector<T>) -> Result<bool> {
        check_dim(self.dim(), u.len())?;
        match RadialSample::about(&self.center, u) {
            Some(s) => {
                self.insert(s)?;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Radius bound for this approximation's side, `None` with no samples.
    pub fn radius_bound(&self, direction: &DVector<T>) -> Option<T> {
        match self.side {
            Side::Inner => inner_cone_max(&self.samples, self.lipschitz, direction),
            Side::Outer => outer_cone_min(&self.samples, self.lipschitz, direction),
        }
    }

    /// Whether `u` belongs to the approximated set. An empty outer
    /// approximation is unbounded; an empty inner one is the center alone.
    pub fn contains(&self, u: &DVector<T>) -> bool {
        let offset = u - &self.center;
        let r = offset.norm();
        if r <= T::zero() {
            return true;
        }
        match self.radius_bound(&(offset / r)) {
            Some(bound) => r <= bound,
            None => self.side == Side::Outer,
        }
    }

    /// Upper bound on the distance from the center to any point of the set.
    pub fn extent(&self) -> Option<T> {
        match self.side {
            Side::Inner => Some(
                self.samples
                    .iter()
                    .fold(T::zero(), |acc, s| if s.radius > acc { s.radius } else { acc }),
            ),
            Side::Outer => self
                .samples
                .iter()
                .map(|s| s.radius)
                .fold(None, |acc: Option<T>, r| match acc {
                    Some(a) if a <= r => Some(a),
                    _ => Some(r),
                })
                .map(|r| r + T::lit(2.0) * self.lipschitz),
        }
    }
}

fn inner_cone_max<T: Real>(samples: &[RadialSample<T>], l: T, dir: &DVector<T>) -> Option<T> {
    samples
        .iter()
        .map(|s| {
            let v = s.radius - l * distance(dir.as_slice(), s.direction.as_slice());
            if v > T::zero() {
                v
            } else {
                T::zero()
            }
        })
        .fold(None, |acc: Option<T>, v| match acc {
            Some(a) if a >= v => Some(a),
            _ => Some(v),
        })
}

fn outer_cone_min<T: Real>(samples: &[RadialSample<T>], l: T, dir: &DVector<T>) -> Option<T> {
    samples
        .iter()
        .map(|s| s.radius + l * distance(dir.as_slice(), s.direction.as_slice()))
        .fold(None, |acc: Option<T>, v| match acc {
            Some(a) if a <= v => Some(a),
            _ => Some(v),
        })
}

fn check_query<T: Real>(approx: &StarSetApprox<T>, direction: &DVector<T>, side: Side) -> Result<()> {
    if approx.side != side {
        return Err(Error::invalid(format!(
            "expected an {} approximation, got {}",
            side.as_str(),
            approx.side.as_str()
        )));
    }
    check_dim(approx.dim(), direction.len())?;
    if (direction.norm() - T::one()).abs() > T::lit(1e-9).max(T::unit_tolerance()) {
        return Err(Error::invalid("query direction must have unit norm"));
    }
    if approx.samples.is_empty() {
        return Err(Error::invalid("star-set approximation has no samples"));
    }
    Ok(())
}

/// Upper bound on the true MGF: `min_i r_i + L |direction - l_i|`.
pub fn mgf_outer_bound<T: Real>(approx: &StarSetApprox<T>, direction: &DVector<T>) -> Result<T> {
    check_query(approx, direction, Side::Outer)?;
    Ok(outer_cone_min(&approx.samples, approx.lipschitz, direction).expect("non-empty"))
}

/// Lower bound on the true MGF: `max_i max(0, r_i - L |direction - l_i|)`.
pub fn mgf_inner_bound<T: Real>(approx: &StarSetApprox<T>, direction: &DVector<T>) -> Result<T> {
    check_query(approx, direction, Side::Inner)?;
    Ok(inner_cone_max(&approx.samples, approx.lipschitz, direction).expect("non-empty"))
}

/// Classifies `u` against an inner and an outer approximation of one set.
pub fn star_contains<T: Real>(
    inner: &StarSetApprox<T>,
    outer: &StarSetApprox<T>,
    u: &DVector<T>,
) -> Result<Containment> {
    if inner.side != Side::Inner || outer.side != Side::Outer {
        return Err(Error::invalid("star_contains needs an inner and an outer approximation"));
    }
    check_dim(inner.dim(), outer.dim())?;
    check_dim(inner.dim(), u.len())?;
    let tol = T::lit(1e-12);
    if distance(inner.center.as_slice(), outer.center.as_slice()) > tol {
        return Err(Error::invalid("inner and outer approximations have different centers"));
    }
    Ok(classify(inner, outer, u))
}

pub(crate) fn classify<T: Real>(
    inner: &StarSetApprox<T>,
    outer: &StarSetApprox<T>,
    u: &DVector<T>,
) -> Containment {
    let offset = u - &inner.center;
    let r = offset.norm();
    if r <= T::zero() {
        // The MGF is undefined at the zero direction.
        let positive = inner.samples.iter().any(|s| s.radius > T::zero());
        return if positive {
            Containment::InsideInner
        } else {
            Containment::Inconclusive
        };
    }
    let dir = offset / r;
    if let Some(bound) = inner.radius_bound(&dir) {
        if r <= bound {
            return Containment::InsideInner;
        }
    }
    if let Some(bound) = outer.radius_bound(&dir) {
        if r > bound {
            return Containment::OutsideOuter;
        }
    }
    Containment::Inconclusive
}

/// Largest observed difference quotient `|r_i - r_j| / |l_i - l_j|`.
///
/// A lower estimate of the MGF Lipschitz constant, used to sanity-check a
/// supplied constant.
pub fn estimate_mgf_lipschitz<T: Real>(samples: &[RadialSample<T>]) -> Result<T> {
    let tol = T::lit(DIRECTION_DEDUP_TOLERANCE);
    let mut best: Option<T> = None;
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i + 1..] {
            check_dim(a.direction.len(), b.direction.len())?;
            let d = distance(a.direction.as_slice(), b.direction.as_slice());
            if d <= tol {
                continue;
            }
            let q = (a.radius - b.radius).abs() / d;
            best = Some(match best {
                Some(cur) if cur >= q => cur,
                _ => q,
            });
        }
    }
    best.ok_or_else(|| Error::invalid("need at least two samples with distinct directions"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    fn single(side: Side, l: &[f64], r: f64, lip: f64) -> StarSetApprox<f64> {
        StarSetApprox::with_samples(
            v(&[0.0, 0.0]),
            lip,
            side,
            [RadialSample::new(v(l), r).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn outer_bound_examples() {
        let s = single(Side::Outer, &[1.0, 0.0], 1.0, 0.0);
        for d in [[0.0, 1.0], [-1.0, 0.0], [0.6, 0.8]] {
            assert_eq!(mgf_outer_bound(&s, &v(&d)).unwrap(), 1.0);
        }
        let s = single(Side::Outer, &[1.0, 0.0], 2.0, 1.0);
        assert_relative_eq!(
            mgf_outer_bound(&s, &v(&[0.0, 1.0])).unwrap(),
            2.0 + 2f64.sqrt(),
            epsilon = 1e-15
        );
        let s = StarSetApprox::with_samples(
            v(&[0.0, 0.0]),
            1.0,
            Side::Outer,
            [
                RadialSample::new(v(&[1.0, 0.0]), 1.0).unwrap(),
                RadialSample::new(v(&[0.0, 1.0]), 3.0).unwrap(),
            ],
        )
        .unwrap();
        assert_relative_eq!(
            mgf_outer_bound(&s, &v(&[0.0, 1.0])).unwrap(),
            1.0 + 2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn inner_bound_examples() {
        let s = single(Side::Inner, &[1.0, 0.0], 2.0, 1.0);
        assert_relative_eq!(
            mgf_inner_bound(&s, &v(&[0.0, 1.0])).unwrap(),
            2.0 - 2f64.sqrt(),
            epsilon = 1e-15
        );
        let s = single(Side::Inner, &[1.0, 0.0], 1.0, 10.0);
        assert_eq!(mgf_inner_bound(&s, &v(&[-1.0, 0.0])).unwrap(), 0.0);
        let s = single(Side::Inner, &[1.0, 0.0], 0.7, 0.0);
        assert_eq!(mgf_inner_bound(&s, &v(&[0.0, -1.0])).unwrap(), 0.7);
    }

    #[test]
    fn bound_errors() {
        let empty = StarSetApprox::new(v(&[0.0, 0.0]), 1.0, Side::Outer).unwrap();
        assert!(mgf_outer_bound(&empty, &v(&[1.0, 0.0])).is_err());
        let s = single(Side::Outer, &[1.0, 0.0], 1.0, 0.0);
        assert!(mgf_inner_bound(&s, &v(&[1.0, 0.0])).is_err());
        assert!(mgf_outer_bound(&s, &v(&[2.0, 0.0])).is_err());
        assert!(RadialSample::new(v(&[1.0, 1.0]), 1.0).is_err());
        assert!(RadialSample::new(v(&[1.0, 0.0]), -1.0).is_err());
    }

    #[test]
    fn containment_examples() {
        let inner = single(Side::Inner, &[1.0, 0.0], 1.0, 0.0);
        let outer = single(Side::Outer, &[1.0, 0.0], 1.0, 0.0);
        assert_eq!(star_contains(&inner, &outer, &v(&[0.5, 0.0])).unwrap(), Containment::InsideInner);
        assert_eq!(star_contains(&inner, &outer, &v(&[2.0, 0.0])).unwrap(), Containment::OutsideOuter);
        let outer2 = single(Side::Outer, &[1.0, 0.0], 2.0, 0.0);
        assert_eq!(
            star_contains(&inner, &outer2, &v(&[1.5, 0.0])).unwrap(),
            Containment::Inconclusive
        );
        assert_eq!(star_contains(&inner, &outer, &v(&[0.0, 0.0])).unwrap(), Containment::InsideInner);
        let flat = single(Side::Inner, &[1.0, 0.0], 0.0, 0.0);
        assert_eq!(star_contains(&flat, &outer, &v(&[0.0, 0.0])).unwrap(), Containment::Inconclusive);
    }

    #[test]
    fn containment_rejects_center_mismatch() {
        let inner = single(Side::Inner, &[1.0, 0.0], 1.0, 0.0);
        let outer = StarSetApprox::with_samples(
            v(&[0.5, 0.0]),
            0.0,
            Side::Outer,
            [RadialSample::new(v(&[1.0, 0.0]), 1.0).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            star_contains(&inner, &outer, &v(&[0.1, 0.0])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn duplicate_directions_keep_side_appropriate_radius() {
        let pts = [v(&[1.0, 0.0]), v(&[3.0, 0.0]), v(&[2.0, 0.0])];
        let inner = StarSetApprox::from_points(v(&[0.0, 0.0]), 1.0, Side::Inner, &pts).unwrap();
        let outer = StarSetApprox::from_points(v(&[0.0, 0.0]), 1.0, Side::Outer, &pts).unwrap();
        assert_eq!(inner.samples().len(), 1);
        assert_eq!(inner.samples()[0].radius, 3.0);
        assert_eq!(outer.samples()[0].radius, 1.0);
    }

    #[test]
    fn lipschitz_estimate_examples() {
        let same = [
            RadialSample::new(v(&[1.0, 0.0]), 2.0).unwrap(),
            RadialSample::new(v(&[0.0, 1.0]), 2.0).unwrap(),
        ];
        assert_eq!(estimate_mgf_lipschitz(&same).unwrap(), 0.0);
        let two = [
            RadialSample::new(v(&[1.0, 0.0]), 1.0).unwrap(),
            RadialSample::new(v(&[0.0, 1.0]), 2.0).unwrap(),
        ];
        assert_relative_eq!(estimate_mgf_lipschitz(&two).unwrap(), 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        let dup = [
            RadialSample::new(v(&[1.0, 0.0]), 1.0).unwrap(),
            RadialSample::new(v(&[1.0, 0.0]), 2.0).unwrap(),
        ];
        assert!(estimate_mgf_lipschitz(&dup).is_err());
    }

    #[test]
    fn empty_sets_behave_as_point_or_everything() {
        let inner = StarSetApprox::new(v(&[1.0]), 1.0, Side::Inner).unwrap();
        let outer = StarSetApprox::new(v(&[1.0]), 1.0, Side::Outer).unwrap();
        assert!(inner.contains(&v(&[1.0])));
        assert!(!inner.contains(&v(&[1.5])));
        assert!(outer.contains(&v(&[100.0])));
        assert_eq!(classify(&inner, &outer, &v(&[3.0])), Containment::Inconclusive);
    }
}
