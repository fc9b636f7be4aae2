//! Exact membership regions used as ground-truth affected sets.

use std::ops::Bound;

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::geometry::ProbeRegion;
use crate::linalg::distance;
use crate::scalar::Real;

/// Product of per-axis intervals; each end may be open, closed or unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox<T: Real> {
    axes: Vec<(Bound<T>, Bound<T>)>,
}

fn bound_value<T: Real>(b: &Bound<T>) -> Option<T> {
    match b {
        Bound::Included(x) | Bound::Excluded(x) => Some(*x),
        Bound::Unbounded => None,
    }
}

impl<T: Real> AxisBox<T> {
    pub fn new(axes: Vec<(Bound<T>, Bound<T>)>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("a box needs at least one axis"));
        }
        for (lo, hi) in &axes {
            if let (Some(a), Some(b)) = (bound_value(lo), bound_value(hi)) {
                if a > b {
                    return Err(Error::invalid("box lower bound exceeds upper bound"));
                }
            }
        }
        Ok(Self { axes })
    }

    /// Closed box `[lower, upper]`.
    pub fn closed(lower: &[T], upper: &[T]) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        Self::new(
            lower
                .iter()
                .zip(upper)
                .map(|(&a, &b)| (Bound::Included(a), Bound::Included(b)))
                .collect(),
        )
    }

    pub fn interval(lower: Bound<T>, upper: Bound<T>) -> Result<Self> {
        Self::new(vec![(lower, upper)])
    }

    pub fn axes(&self) -> &[(Bound<T>, Bound<T>)] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn contains(&self, u: &DVector<T>) -> bool {
        u.len() == self.dim()
            && self.axes.iter().zip(u.iter()).all(|((lo, hi), &x)| {
                let above = match lo {
                    Bound::Included(a) => x >= *a,
                    Bound::Excluded(a) => x > *a,
                    Bound::Unbounded => true,
                };
                let below = match hi {
                    Bound::Included(b) => x <= *b,
                    Bound::Excluded(b) => x < *b,
                    Bound::Unbounded => true,
                };
                above && below
            })
    }

    fn intersects_box(&self, other: &Self) -> bool {
        self.axes.iter().zip(&other.axes).all(|(a, b)| {
            let lo = tighter_lower(&a.0, &b.0);
            let hi = tighter_upper(&a.1, &b.1);
            match (bound_value(&lo), bound_value(&hi)) {
                (Some(l), Some(h)) => {
                    l < h || (l == h && matches!(lo, Bound::Included(_)) && matches!(hi, Bound::Included(_)))
                }
                _ => true,
            }
        })
    }

    /// Nearest point of the box closure to `p`.
    fn clamp(&self, p: &DVector<T>) -> DVector<T> {
        DVector::from_fn(self.dim(), |k, _| {
            let mut x = p[k];
            if let Some(a) = bound_value(&self.axes[k].0) {
                if x < a {
                    x = a;
                }
            }
            if let Some(b) = bound_value(&self.axes[k].1) {
                if x > b {
                    x = b;
                }
            }
            x
        })
    }

    pub fn is_bounded(&self) -> bool {
        self.axes
            .iter()
            .all(|(a, b)| bound_value(a).is_some() && bound_value(b).is_some())
    }

    /// Diagonal length of a bounded box.
    pub fn diameter(&self) -> Option<T> {
        let mut acc = T::zero();
        for (a, b) in &self.axes {
            let d = bound_value(b)? - bound_value(a)?;
            acc += d * d;
        }
        Some(acc.sqrt())
    }
}

fn tighter_lower<T: Real>(a: &Bound<T>, b: &Bound<T>) -> Bound<T> {
    match (bound_value(a), bound_value(b)) {
        (None, _) => *b,
        (_, None) => *a,
        (Some(x), Some(y)) if x > y => *a,
        (Some(x), Some(y)) if y > x => *b,
        _ => {
            if matches!(a, Bound::Excluded(_)) {
                *a
            } else {
                *b
            }
        }
    }
}

fn tighter_upper<T: Real>(a: &Bound<T>, b: &Bound<T>) -> Bound<T> {
    match (bound_value(a), bound_value(b)) {
        (None, _) => *b,
        (_, None) => *a,
        (Some(x), Some(y)) if x < y => *a,
        (Some(x), Some(y)) if y < x => *b,
        _ => {
            if matches!(a, Bound::Excluded(_)) {
                *a
            } else {
                *b
            }
        }
    }
}

impl<T: Real> ProbeRegion<T> for AxisBox<T> {
    fn dim(&self) -> usize {
        AxisBox::dim(self)
    }

    fn bounding_box(&self) -> Result<(DVector<T>, DVector<T>)> {
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for (a, b) in &self.axes {
            match (bound_value(a), bound_value(b)) {
                (Some(a), Some(b)) => {
                    lo.push(a);
                    hi.push(b);
                }
                _ => return Err(Error::invalid("cannot probe an unbounded box")),
            }
        }
        Ok((DVector::from_vec(lo), DVector::from_vec(hi)))
    }

    fn contains(&self, u: &DVector<T>) -> bool {
        AxisBox::contains(self, u)
    }
}

/// Ground-truth affected set of a degradation mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Region<T: Real> {
    Everywhere,
    Box(AxisBox<T>),
    /// Closed Euclidean ball.
    Ball { center: DVector<T>, radius: T },
}

impl<T: Real> Region<T> {
    pub fn ball(center: DVector<T>, radius: T) -> Result<Self> {
        if !(radius >= T::zero()) {
            return Err(Error::invalid("ball radius must be non-negative"));
        }
        Ok(Region::Ball { center, radius })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Region::Everywhere => None,
            Region::Box(b) => Some(b.dim()),
            Region::Ball { center, .. } => Some(center.len()),
        }
    }

    pub fn contains(&self, u: &DVector<T>) -> bool {
        match self {
            Region::Everywhere => true,
            Region::Box(b) => b.contains(u),
            Region::Ball { center, radius } => {
                u.len() == center.len() && distance(u.as_slice(), center.as_slice()) <= *radius
            }
        }
    }

    /// Conservative overlap test: touching closed boundaries count as overlap.
    pub fn intersects(&self, other: &Self) -> bool {
        match (self, other) {
            (Region::Everywhere, _) | (_, Region::Everywhere) => true,
            (Region::Box(a), Region::Box(b)) => a.intersects_box(b),
            (Region::Ball { center: c1, radius: r1 }, Region::Ball { center: c2, radius: r2 }) => {
                distance(c1.as_slice(), c2.as_slice()) <= *r1 + *r2
            }
            (Region::Box(b), Region::Ball { center, radius })
            | (Region::Ball { center, radius }, Region::Box(b)) => {
                let nearest = b.clamp(center);
                let d = distance(nearest.as_slice(), center.as_slice());
                d < *radius || (d == *radius && b.contains(&nearest))
            }
        }
    }
}

impl<T: Real> ProbeRegion<T> for Region<T> {
    fn dim(&self) -> usize {
        Region::dim(self).unwrap_or(0)
    }

    fn bounding_box(&self) -> Result<(DVector<T>, DVector<T>)> {
        match self {
            Region::Everywhere => Err(Error::invalid("cannot probe the whole space")),
            Region::Box(b) => b.bounding_box(),
            Region::Ball { center, radius } => {
                Ok((center.add_scalar(-*radius), center.add_scalar(*radius)))
            }
        }
    }

    fn contains(&self, u: &DVector<T>) -> bool {
        Region::contains(self, u)
    }
}
