//! Affine fits of clustered effective-input pairs.
//!
//! Inputs and outputs are centered on a reference pair `o`, so each basis
//! pair `j` contributes the column `u_j - u_o` and the increment
//! `(v_j - v_o) - (u_j - u_o)`. The linear part then maps centered inputs
//! to centered outputs and the translation is `v_o - P u_o`.

use nalgebra::{DMatrix, DVector};

use super::cluster::Cluster;
use super::sample::EffectivePair;
use crate::degradation::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{condition_number, numerical_rank, qr_solve, singular_values, RANK_TOLERANCE};
use crate::scalar::Real;

/// Linear map sending each column of `inputs` to the same column of
/// `inputs + deltas`, in the least-squares sense when there are more
/// columns than rows.
pub fn fit_linear<T: Real>(inputs: &DMatrix<T>, deltas: &DMatrix<T>) -> Result<DMatrix<T>> {
    if inputs.shape() != deltas.shape() {
        return Err(Error::invalid(format!(
            "inputs are {:?} but deltas are {:?}",
            inputs.shape(),
            deltas.shape()
        )));
    }
    let m = inputs.nrows();
    if inputs.ncols() < m || numerical_rank(inputs) < m {
        return Err(Error::Singular {
            what: "input basis".into(),
            condition: condition_number(inputs),
        });
    }
    // inputs^T P^T = (inputs + deltas)^T
    let targets = (inputs + deltas).transpose();
    Ok(qr_solve(&inputs.transpose(), &targets)?.transpose())
}

/// Index of the pair whose input lies farthest from the input centroid.
pub(crate) fn select_reference<T: Real>(pairs: &[EffectivePair<T>]) -> Option<usize> {
    let first = pairs.first()?;
    let mut centroid = DVector::zeros(first.dim());
    for p in pairs {
        centroid += &p.input;
    }
    centroid /= T::lit(pairs.len() as f64);
    let mut best = (0, T::zero());
    for (i, p) in pairs.iter().enumerate() {
        let d = (&p.input - &centroid).norm();
        if d > best.1 {
            best = (i, d);
        }
    }
    Some(best.0)
}

/// Greedy volume basis: repeatedly takes the centered input with the largest
/// component orthogonal to those already chosen. Empty when fewer than `m`
/// independent directions exist.
pub(crate) fn select_basis<T: Real>(pairs: &[EffectivePair<T>], reference: usize) -> Vec<usize> {
    let Some(origin) = pairs.get(reference) else {
        return Vec::new();
    };
    let m = origin.dim();
    let centered: Vec<(usize, DVector<T>)> = pairs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != reference)
        .map(|(i, p)| (i, &p.input - &origin.input))
        .collect();
    let scale = centered.iter().fold(T::zero(), |acc, (_, c)| acc.max(c.norm()));
    if scale <= T::zero() {
        return Vec::new();
    }
    let cut = scale * T::lit(RANK_TOLERANCE);
    let mut residuals: Vec<DVector<T>> = centered.iter().map(|(_, c)| c.clone()).collect();
    let mut chosen = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<(usize, T)> = None;
        for (k, r) in residuals.iter().enumerate() {
            let n = r.norm();
            if n > cut && best.is_none_or(|(_, b)| n > b) {
                best = Some((k, n));
            }
        }
        let Some((k, n)) = best else {
            return Vec::new();
        };
        let q = &residuals[k] / n;
        for r in residuals.iter_mut() {
            let proj = q.dot(r);
            r.axpy(-proj, &q, T::one());
        }
        chosen.push(centered[k].0);
    }
    chosen
}

/// Dimension of the affine hull of the inputs.
pub(crate) fn affine_rank<T: Real>(pairs: &[&EffectivePair<T>]) -> usize {
    let Some(first) = pairs.first() else {
        return 0;
    };
    let m = first.dim();
    let centered = DMatrix::from_fn(m, pairs.len(), |r, c| pairs[c].input[r] - first.input[r]);
    numerical_rank(&centered)
}

/// Largest residual of the minimum-norm least-squares affine fit of `pairs`.
pub(crate) fn affine_fit_residual<T: Real>(pairs: &[&EffectivePair<T>]) -> T {
    let Some(first) = pairs.first() else {
        return T::zero();
    };
    let m = first.dim();
    let k = pairs.len();
    let mut mean = DVector::zeros(m);
    for p in pairs {
        mean += &p.input;
    }
    mean /= T::lit(k as f64);
    let design = DMatrix::from_fn(k, m + 1, |r, c| if c < m { pairs[r].input[c] - mean[c] } else { T::one() });
    let targets = DMatrix::from_fn(k, m, |r, c| pairs[r].effective[c]);
    let sv = singular_values(&design);
    let eps = sv.first().copied().unwrap_or(T::zero()) * T::lit(RANK_TOLERANCE);
    let Ok(coef) = design.clone().svd(true, true).solve(&targets, eps) else {
        return T::max_value().unwrap_or(T::one() / T::default_epsilon());
    };
    let fitted = design * coef - targets;
    fitted
        .row_iter()
        .fold(T::zero(), |acc, row| acc.max(row.norm()))
}

/// Fits `Q u = P u + p` to a cluster with a populated basis and reference.
pub fn fit_affine<T: Real>(cluster: &Cluster<T>) -> Result<AffineMap<T>> {
    let Some(o) = cluster.reference_index else {
        return Err(Error::IdentificationFailure("cluster has no reference pair".into()));
    };
    if cluster.basis_indices.is_empty() {
        return Err(Error::IdentificationFailure(format!(
            "cluster of {} pairs lacks a basis of independent inputs",
            cluster.pairs.len()
        )));
    }
    if cluster.basis_indices.contains(&o) {
        return Err(Error::IdentificationFailure("reference pair is part of the basis".into()));
    }
    let origin = &cluster.pairs[o];
    let m = origin.dim();
    let k = cluster.basis_indices.len();
    let mut inputs = DMatrix::zeros(m, k);
    let mut deltas = DMatrix::zeros(m, k);
    for (c, &j) in cluster.basis_indices.iter().enumerate() {
        let pair = &cluster.pairs[j];
        let du = &pair.input - &origin.input;
        let dv = &pair.effective - &origin.effective;
        deltas.set_column(c, &(dv - &du));
        inputs.set_column(c, &du);
    }
    let linear = fit_linear(&inputs, &deltas)
        .map_err(|e| Error::IdentificationFailure(format!("linear fit failed: {e}")))?;
    let translation = &origin.effective - &linear * &origin.input;
    AffineMap::new(linear, translation)
}

/// `|Q u_j - v_j|` for every pair.
pub fn pair_residuals<T: Real>(map: &AffineMap<T>, pairs: &[EffectivePair<T>]) -> Result<Vec<T>> {
    pairs
        .iter()
        .map(|p| Ok((map.apply(&p.input)? - &p.effective).norm()))
        .collect()
}
