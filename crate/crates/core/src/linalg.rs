//! Small dense linear-algebra helpers shared by the fitting and recovery code.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative singular-value threshold used for every rank decision.
pub const RANK_TOLERANCE: f64 = 1e-9;

pub(crate) fn singular_values<T: Real>(a: &DMatrix<T>) -> Vec<T> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<T> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Numerical rank with threshold `RANK_TOLERANCE * sigma_max`.
pub fn numerical_rank<T: Real>(a: &DMatrix<T>) -> usize {
    let s = singular_values(a);
    rank_of(&s)
}

fn rank_of<T: Real>(s: &[T]) -> usize {
    match s.first() {
        None => 0,
        Some(&max) if max <= T::zero() => 0,
        Some(&max) => {
            let cut = max * T::lit(RANK_TOLERANCE);
            s.iter().filter(|&&x| x > cut).count()
        }
    }
}

/// Ensures `a` has full column rank; reports the singular values otherwise.
pub(crate) fn require_full_column_rank<T: Real>(a: &DMatrix<T>, what: &str) -> Result<()> {
    if a.ncols() > a.nrows() {
        return Err(Error::RankDeficient {
            what: format!("{what} (more columns than rows)"),
            rank: numerical_rank(a),
            singular_values: singular_values(a).iter().map(|x| x.as_f64()).collect(),
        });
    }
    let s = singular_values(a);
    let rank = rank_of(&s);
    if rank < a.ncols() {
        return Err(Error::RankDeficient {
            what: what.to_string(),
            rank,
            singular_values: s.iter().map(|x| x.as_f64()).collect(),
        });
    }
    Ok(())
}

/// Least-squares solution of `a X = b` through a Householder QR of a
/// full-column-rank `a`. The SVD solve loses several digits when singular
/// values nearly coincide; QR does not.
pub(crate) fn qr_solve<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>> {
    let qr = a.clone().qr();
    let rhs = qr.q().transpose() * b;
    qr.r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::invalid("triangular solve hit a zero pivot"))
}

/// Moore-Penrose pseudo-inverse `(A^T A)^-1 A^T` of a full-column-rank matrix.
pub fn pseudo_inverse<T: Real>(a: &DMatrix<T>) -> Result<DMatrix<T>> {
    require_full_column_rank(a, "input map")?;
    qr_solve(a, &DMatrix::identity(a.nrows(), a.nrows()))
}

/// Least-squares solution of `a x = b` for full-column-rank `a`.
pub fn least_squares<T: Real>(a: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    require_full_column_rank(a, "input map")?;
    Ok(qr_solve(a, &DMatrix::from_column_slice(b.len(), 1, b.as_slice()))?.column(0).into_owned())
}

pub(crate) fn condition_number<T: Real>(a: &DMatrix<T>) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if min > T::zero() => (max / min).as_f64(),
        _ => f64::INFINITY,
    }
}

/// Euclidean distance between two equally sized slices.
#[inline]
pub(crate) fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    distance_sq(a, b).sqrt()
}

#[inline]
pub(crate) fn distance_sq<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}
