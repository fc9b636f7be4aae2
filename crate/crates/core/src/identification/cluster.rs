//! Separation of effective-input pairs into unaffected inputs and
//! degradation modes.
//!
//! Pairs whose effective input equals the command are set aside first. The
//! rest are linked when their graph points `(u, v)` are closer than the
//! separation, and linked fragments that share one affine map (checked only
//! when the union over-determines the fit) are merged.

use super::fit::{affine_fit_residual, affine_rank, select_basis, select_reference};
use super::sample::EffectivePair;
use crate::error::{Error, Result};
use crate::linalg::distance_sq;
use crate::scalar::Real;

/// Default relative tolerance of the identity test `|v - u| <= tol (1 + |u|)`.
pub const DEFAULT_IDENTITY_TOLERANCE: f64 = 1e-7;

/// Default relative residual below which two fragments share an affine map.
pub const DEFAULT_MERGE_TOLERANCE: f64 = 1e-7;

/// Pairs attributed to one degradation mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<T: Real> {
    pub pairs: Vec<EffectivePair<T>>,
    /// Position of each pair in the original pair list.
    pub members: Vec<usize>,
    /// Pairs whose inputs, taken relative to the reference, are independent.
    /// Empty while the cluster does not span the input space.
    pub basis_indices: Vec<usize>,
    /// Pair the fit is centered on; never part of the basis.
    pub reference_index: Option<usize>,
}

impl<T: Real> Cluster<T> {
    pub fn new(pairs: Vec<EffectivePair<T>>, members: Vec<usize>) -> Self {
        let reference_index = select_reference(&pairs);
        let basis_indices = reference_index
            .map(|o| select_basis(&pairs, o))
            .unwrap_or_default();
        Self { pairs, members, basis_indices, reference_index }
    }

    /// Whether the cluster holds enough independent inputs for a unique fit.
    pub fn is_identifiable(&self) -> bool {
        self.reference_index.is_some() && !self.basis_indices.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterOptions<T: Real> {
    pub delta: T,
    pub n_modes: usize,
    pub identity_tol: T,
    pub merge_tol: T,
}

impl<T: Real> ClusterOptions<T> {
    pub fn new(delta: T, n_modes: usize) -> Self {
        Self {
            delta,
            n_modes,
            identity_tol: T::lit(DEFAULT_IDENTITY_TOLERANCE),
            merge_tol: T::lit(DEFAULT_MERGE_TOLERANCE),
        }
    }
}

/// Result of splitting a pair list.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T: Real> {
    pub clusters: Vec<Cluster<T>>,
    /// Indices of pairs with `v = u` within tolerance.
    pub unaffected: Vec<usize>,
}

pub fn is_identity_pair<T: Real>(pair: &EffectivePair<T>, identity_tol: T) -> bool {
    (&pair.effective - &pair.input).norm() <= identity_tol * (T::one() + pair.input.norm())
}

/// Clusters with the default tolerances, dropping the unaffected pool.
pub fn cluster_pairs<T: Real>(pairs: &[EffectivePair<T>], delta: T, n_modes: usize) -> Result<Vec<Cluster<T>>> {
    partition_pairs(pairs, &ClusterOptions::new(delta, n_modes)).map(|p| p.clusters)
}

pub fn partition_pairs<T: Real>(pairs: &[EffectivePair<T>], opts: &ClusterOptions<T>) -> Result<Partition<T>> {
    if pairs.is_empty() {
        return Err(Error::invalid("no pairs to cluster"));
    }
    if !(opts.delta > T::zero()) {
        return Err(Error::invalid("separation must be positive"));
    }
    if opts.n_modes == 0 {
        return Err(Error::invalid("mode count must be positive"));
    }
    let m = pairs[0].dim();
    if let Some(bad) = pairs.iter().position(|p| p.dim() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: pairs[bad].dim() });
    }

    let (unaffected, affected): (Vec<usize>, Vec<usize>) =
        (0..pairs.len()).partition(|&i| is_identity_pair(&pairs[i], opts.identity_tol));

    let mut fragments = single_linkage(pairs, &affected, opts.delta);
    merge_consistent(pairs, &mut fragments, opts.merge_tol);

    if fragments.len() > opts.n_modes {
        let first = fragments[opts.n_modes][0];
        let p = &pairs[first];
        return Err(Error::IdentificationFailure(format!(
            "cannot split affected pairs into at most {} clusters separated by {}: pair {} (u = {:?}, v = {:?}) opens cluster {} of {}",
            opts.n_modes,
            opts.delta.as_f64(),
            first,
            p.input.iter().map(|x| x.as_f64()).collect::<Vec<_>>(),
            p.effective.iter().map(|x| x.as_f64()).collect::<Vec<_>>(),
            opts.n_modes + 1,
            fragments.len()
        )));
    }

    let clusters = fragments
        .into_iter()
        .map(|members| {
            let cp = members.iter().map(|&i| pairs[i].clone()).collect();
            Cluster::new(cp, members)
        })
        .collect();
    Ok(Partition { clusters, unaffected })
}

/// Connected components of the "closer than delta" graph, each sorted, in
/// order of their smallest index.
fn single_linkage<T: Real>(pairs: &[EffectivePair<T>], idx: &[usize], delta: T) -> Vec<Vec<usize>> {
    let points: Vec<_> = idx.iter().map(|&i| pairs[i].graph_point()).collect();
    let mut parent: Vec<usize> = (0..idx.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let d2 = delta * delta;
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if distance_sq(points[a].as_slice(), points[b].as_slice()) < d2 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; points.len()];
    for (a, &member) in idx.iter().enumerate() {
        let r = find(&mut parent, a);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(member);
    }
    groups
}

/// Cap on candidate unions examined per merge search.
const MERGE_BUDGET: usize = 50_000;

/// Merges fragments that share one affine map. A fragment absorbs the
/// smallest group of other fragments whose union over-determines an affine
/// fit and is consistent with it; groups that leave the fit under-determined
/// carry no evidence and are never merged.
fn merge_consistent<T: Real>(pairs: &[EffectivePair<T>], fragments: &mut Vec<Vec<usize>>, tol: T) {
    let max_group = pairs.first().map_or(1, |p| p.dim() + 1);
    'restart: loop {
        for a in 0..fragments.len() {
            if let Some(group) = find_group(pairs, fragments, a, max_group, tol) {
                // Every group index exceeds `a`, so removing from the back
                // keeps `a` and the minimum-index ordering intact.
                for &b in group.iter().rev() {
                    let moved = fragments.remove(b);
                    fragments[a].extend(moved);
                }
                fragments[a].sort_unstable();
                continue 'restart;
            }
        }
        return;
    }
}

fn find_group<T: Real>(
    pairs: &[EffectivePair<T>],
    fragments: &[Vec<usize>],
    a: usize,
    max_group: usize,
    tol: T,
) -> Option<Vec<usize>> {
    // Only fragments after `a` are candidates; earlier ones already had
    // their turn as the absorbing fragment.
    let others: Vec<usize> = (a + 1..fragments.len()).collect();
    let mut budget = MERGE_BUDGET;
    for size in 1..=max_group.min(others.len()) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let group: Vec<usize> = combo.iter().map(|&k| others[k]).collect();
            if consistent_union(pairs, fragments, a, &group, tol) {
                return Some(group);
            }
            if !next_combination(&mut combo, others.len()) {
                break;
            }
        }
    }
    None
}

/// Advances `combo` to the next `combo.len()`-subset of `0..n` in
/// lexicographic order; `false` once exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn consistent_union<T: Real>(
    pairs: &[EffectivePair<T>],
    fragments: &[Vec<usize>],
    a: usize,
    group: &[usize],
    tol: T,
) -> bool {
    let union: Vec<&EffectivePair<T>> = std::iter::once(a)
        .chain(group.iter().copied())
        .flat_map(|f| fragments[f].iter())
        .map(|&i| &pairs[i])
        .collect();
    if union.len() < affine_rank(&union) + 2 {
        return false;
    }
    let scale = union
        .iter()
        .fold(T::zero(), |acc, p| acc.max(p.input.norm()).max(p.effective.norm()));
    affine_fit_residual(&union) <= tol * (T::one() + scale)
}
