use nalgebra::DVector;

use super::cluster::{partition_pairs, ClusterOptions, DEFAULT_IDENTITY_TOLERANCE, DEFAULT_MERGE_TOLERANCE};
use super::fit::{fit_affine, pair_residuals};
use super::recover::recover_pairs;
use super::sample::{ControlSample, EffectivePair};
use crate::degradation::AffineMap;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{classify, estimate_mgf_lipschitz, Containment, Side, StarSetApprox};
use crate::linalg::{condition_number, numerical_rank};
use crate::scalar::Real;
use crate::simulation::ControlAffine;

/// Default bound on a mode's relative fit residual.
pub const DEFAULT_MAX_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentificationConfig<T: Real> {
    /// Separation `delta` between mode graphs.
    pub delta: T,
    /// Upper bound `N` on the number of degradation modes.
    pub n_modes: usize,
    /// MGF Lipschitz constants of the inner approximations, one per mode in
    /// cluster order. The last entry covers any further modes.
    pub lipschitz_inner: Vec<T>,
    /// Same for the outer approximations.
    pub lipschitz_outer: Vec<T>,
    /// MGF Lipschitz constant used for the unaffected region.
    pub lipschitz_unaffected: T,
    pub identity_tol: T,
    pub merge_tol: T,
    /// A mode whose largest residual exceeds `max_residual (1 + scale)` is an
    /// identification failure; `None` disables the check.
    pub max_residual: Option<T>,
    /// Input channels to identify; all of them when `None`.
    pub channels: Option<Vec<usize>>,
}

impl<T: Real> IdentificationConfig<T> {
    pub fn new(delta: T, n_modes: usize, lipschitz: T) -> Self {
        Self {
            delta,
            n_modes,
            lipschitz_inner: vec![lipschitz],
            lipschitz_outer: vec![lipschitz],
            lipschitz_unaffected: lipschitz,
            identity_tol: T::lit(DEFAULT_IDENTITY_TOLERANCE),
            merge_tol: T::lit(DEFAULT_MERGE_TOLERANCE),
            max_residual: Some(T::lit(DEFAULT_MAX_RESIDUAL)),
            channels: None,
        }
    }

    pub fn with_channels(mut self, channels: Vec<usize>) -> Self {
        self.channels = Some(channels);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > T::zero()) {
            return Err(Error::Configuration("delta must be positive".into()));
        }
        if self.n_modes == 0 {
            return Err(Error::Configuration("mode count must be positive".into()));
        }
        for list in [&self.lipschitz_inner, &self.lipschitz_outer] {
            if list.is_empty() || list.iter().any(|l| !(*l >= T::zero())) {
                return Err(Error::Configuration(
                    "Lipschitz constants must be a non-empty list of non-negative values".into(),
                ));
            }
        }
        if !(self.lipschitz_unaffected >= T::zero()) {
            return Err(Error::Configuration("Lipschitz constants must be non-negative".into()));
        }
        if let Some(c) = &self.channels {
            if c.is_empty() {
                return Err(Error::Configuration("channel list must not be empty".into()));
            }
            let mut sorted = c.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != c.len() {
                return Err(Error::Configuration("channel list has duplicates".into()));
            }
        }
        Ok(())
    }

    fn pick(list: &[T], i: usize) -> T {
        list[i.min(list.len() - 1)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeReconstruction<T: Real> {
    /// `None` while the cluster does not yet pin down an affine map.
    pub map: Option<AffineMap<T>>,
    pub inner: StarSetApprox<T>,
    pub outer: StarSetApprox<T>,
    /// Largest entry of `residuals`.
    pub residual: T,
    pub pairs: Vec<EffectivePair<T>>,
    /// `|Q u_j - v_j|` per pair; empty when unidentified.
    pub residuals: Vec<T>,
}

impl<T: Real> ModeReconstruction<T> {
    pub fn is_identified(&self) -> bool {
        self.map.is_some()
    }

    pub fn classify(&self, u: &DVector<T>) -> Containment {
        classify(&self.inner, &self.outer, u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdmReconstruction<T: Real> {
    /// Dimension of the identified input channels.
    pub input_dim: usize,
    /// Dimension of the full command vector.
    pub full_dim: usize,
    /// Channels of the full command that were identified.
    pub channels: Vec<usize>,
    pub separation: T,
    pub mode_count: usize,
    pub modes: Vec<ModeReconstruction<T>>,
    pub unaffected: Vec<EffectivePair<T>>,
    /// Inner and outer approximations of the region where `v = u` was seen.
    pub unaffected_region: Option<(StarSetApprox<T>, StarSetApprox<T>)>,
}

/// Outcome of [`query`].
#[derive(Debug, Clone, PartialEq)]
pub enum QueryResult<T: Real> {
    Passthrough(DVector<T>),
    Mapped(DVector<T>, usize),
    Inconclusive,
}

/// Order in which [`viabilize_with`] tries candidate preimages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ViabilizeStrategy {
    /// Return the command unchanged whenever it passes through undegraded.
    #[default]
    PassthroughFirst,
    /// Prefer a preimage through an identified mode.
    ModesFirst,
}

impl<T: Real> CdmReconstruction<T> {
    pub fn identified_count(&self) -> usize {
        self.modes.iter().filter(|m| m.is_identified()).count()
    }

    /// Whether `u` is certified to lie in some identified mode or in the
    /// observed unaffected region.
    pub fn inner_covers(&self, u: &DVector<T>) -> bool {
        self.modes.iter().any(|m| m.classify(u) == Containment::InsideInner)
            || self
                .unaffected_region
                .as_ref()
                .is_some_and(|(i, o)| classify(i, o, u) == Containment::InsideInner)
    }

    /// Restricts a full command vector to the identified channels.
    pub fn project(&self, full: &DVector<T>) -> Result<DVector<T>> {
        check_dim(self.full_dim, full.len())?;
        Ok(DVector::from_iterator(self.channels.len(), self.channels.iter().map(|&c| full[c])))
    }

    /// Writes identified-channel values back into a copy of `full`.
    pub fn embed(&self, full: &DVector<T>, part: &DVector<T>) -> Result<DVector<T>> {
        check_dim(self.full_dim, full.len())?;
        check_dim(self.input_dim, part.len())?;
        let mut out = full.clone();
        for (k, &c) in self.channels.iter().enumerate() {
            out[c] = part[k];
        }
        Ok(out)
    }
}

/// Recovers effective inputs from `samples` and identifies the modes.
pub fn build_reconstruction<T: Real>(
    samples: &[ControlSample<T>],
    model: &(impl ControlAffine<T> + ?Sized),
    config: &IdentificationConfig<T>,
) -> Result<CdmReconstruction<T>> {
    config.validate()?;
    let pairs = recover_pairs(samples, model, config.channels.as_deref())?;
    build_from_pairs(&pairs, model.input_dim(), config)
}

/// Identifies the modes from already recovered pairs. `full_dim` is the
/// dimension of the command before channel selection.
pub fn build_from_pairs<T: Real>(
    pairs: &[EffectivePair<T>],
    full_dim: usize,
    config: &IdentificationConfig<T>,
) -> Result<CdmReconstruction<T>> {
    config.validate()?;
    let first = pairs.first().ok_or_else(|| Error::invalid("no samples to identify from"))?;
    let m = first.dim();
    let channels = match &config.channels {
        Some(c) => c.clone(),
        None => (0..m).collect(),
    };
    check_dim(channels.len(), m)?;
    if let Some(&bad) = channels.iter().find(|&&c| c >= full_dim) {
        return Err(Error::Configuration(format!("channel {bad} exceeds input dimension {full_dim}")));
    }

    let opts = ClusterOptions {
        delta: config.delta,
        n_modes: config.n_modes,
        identity_tol: config.identity_tol,
        merge_tol: config.merge_tol,
    };
    let partition = partition_pairs(pairs, &opts)?;
    let unaffected: Vec<EffectivePair<T>> = partition.unaffected.iter().map(|&i| pairs[i].clone()).collect();

    let mut modes = Vec::with_capacity(partition.clusters.len());
    for (i, cluster) in partition.clusters.iter().enumerate() {
        let center = cluster.pairs[0].input.clone();
        let l_inner = IdentificationConfig::pick(&config.lipschitz_inner, i);
        let l_outer = IdentificationConfig::pick(&config.lipschitz_outer, i);
        let inner = StarSetApprox::from_points(center.clone(), l_inner, Side::Inner, cluster.pairs.iter().map(|p| &p.input))?;
        let outer = StarSetApprox::from_points(center, l_outer, Side::Outer, unaffected.iter().map(|p| &p.input))?;
        if let Ok(estimate) = estimate_mgf_lipschitz(inner.samples()) {
            if estimate > l_inner {
                log::warn!(
                    "mode {i}: observed MGF slope {} exceeds the supplied Lipschitz constant {}",
                    estimate.as_f64(),
                    l_inner.as_f64()
                );
            }
        }

        let (map, residuals) = if cluster.is_identifiable() {
            let map = fit_affine(cluster)?;
            let residuals = pair_residuals(&map, &cluster.pairs)?;
            (Some(map), residuals)
        } else {
            (None, Vec::new())
        };
        let residual = residuals.iter().fold(T::zero(), |acc, &r| acc.max(r));
        if let Some(limit) = config.max_residual {
            let scale = cluster
                .pairs
                .iter()
                .fold(T::zero(), |acc, p| acc.max(p.input.norm()).max(p.effective.norm()));
            if residual > limit * (T::one() + scale) {
                return Err(Error::IdentificationFailure(format!(
                    "mode {i} ({} pairs starting at pair {}) is not affine: residual {} exceeds {}; the separation may be larger than the gap between modes",
                    cluster.pairs.len(),
                    cluster.members[0],
                    residual.as_f64(),
                    (limit * (T::one() + scale)).as_f64()
                )));
            }
        }
        modes.push(ModeReconstruction { map, inner, outer, residual, pairs: cluster.pairs.clone(), residuals });
    }

    let unaffected_region = match unaffected.first() {
        Some(anchor) => {
            let l = config.lipschitz_unaffected;
            let inner = StarSetApprox::from_points(anchor.input.clone(), l, Side::Inner, unaffected.iter().map(|p| &p.input))?;
            let affected_inputs = partition.clusters.iter().flat_map(|c| c.pairs.iter().map(|p| &p.input));
            let outer = StarSetApprox::from_points(anchor.input.clone(), l, Side::Outer, affected_inputs)?;
            Some((inner, outer))
        }
        None => None,
    };

    Ok(CdmReconstruction {
        input_dim: m,
        full_dim,
        channels,
        separation: config.delta,
        mode_count: config.n_modes,
        modes,
        unaffected,
        unaffected_region,
    })
}

/// Evaluates the reconstructed map at `u` where it is certified.
pub fn query<T: Real>(recon: &CdmReconstruction<T>, u: &DVector<T>) -> Result<QueryResult<T>> {
    check_dim(recon.input_dim, u.len())?;
    let classes: Vec<Containment> = recon.modes.iter().map(|m| m.classify(u)).collect();
    if classes.iter().all(|c| *c == Containment::OutsideOuter) {
        return Ok(QueryResult::Passthrough(u.clone()));
    }
    let mut inside = classes.iter().enumerate().filter(|(_, c)| **c == Containment::InsideInner);
    if let (Some((i, _)), None) = (inside.next(), inside.next()) {
        if let Some(map) = &recon.modes[i].map {
            return Ok(QueryResult::Mapped(map.apply(u)?, i));
        }
    }
    Ok(QueryResult::Inconclusive)
}

/// Command that makes the degraded plant receive `u_cmd`.
pub fn viabilize<T: Real>(recon: &CdmReconstruction<T>, u_cmd: &DVector<T>) -> Result<DVector<T>> {
    viabilize_with(recon, u_cmd, ViabilizeStrategy::PassthroughFirst)
}

pub fn viabilize_with<T: Real>(
    recon: &CdmReconstruction<T>,
    u_cmd: &DVector<T>,
    strategy: ViabilizeStrategy,
) -> Result<DVector<T>> {
    let passes = matches!(query(recon, u_cmd)?, QueryResult::Passthrough(_));
    if passes && strategy == ViabilizeStrategy::PassthroughFirst {
        return Ok(u_cmd.clone());
    }
    let mut diagnostics = Vec::new();
    for (i, mode) in recon.modes.iter().enumerate() {
        let Some(map) = &mode.map else {
            diagnostics.push(format!("mode {i}: not yet identified"));
            continue;
        };
        let linear = map.linear();
        if numerical_rank(linear) < recon.input_dim {
            diagnostics.push(format!(
                "mode {i}: linear part is singular (condition {:e})",
                condition_number(linear)
            ));
            continue;
        }
        let rhs = u_cmd - map.translation();
        let Some(u_v) = linear.clone().lu().solve(&rhs) else {
            diagnostics.push(format!("mode {i}: linear solve failed"));
            continue;
        };
        match query(recon, &u_v)? {
            QueryResult::Mapped(_, j) if j == i => return Ok(u_v),
            _ => diagnostics.push(format!(
                "mode {i}: preimage {:?} is not certified inside the mode",
                u_v.iter().map(|x| x.as_f64()).collect::<Vec<_>>()
            )),
        }
    }
    if passes {
        return Ok(u_cmd.clone());
    }
    diagnostics.push("command is not certified to pass through undegraded".into());
    Err(Error::Unviable { diagnostics })
}

/// Error bound `min_j (eps_j + l_p |u_j - u|)` over the pairs of the mode
/// whose inner approximation contains `u`.
///
/// Bounds the true error whenever `l_p` is a Lipschitz constant of the
/// difference between the true map and the fitted one.
pub fn lipschitz_error_bound<T: Real>(recon: &CdmReconstruction<T>, u: &DVector<T>, l_p: T) -> Result<T> {
    check_dim(recon.input_dim, u.len())?;
    if !(l_p > T::zero()) {
        return Err(Error::invalid("Lipschitz constant must be positive"));
    }
    let mode = recon
        .modes
        .iter()
        .find(|m| m.is_identified() && m.classify(u) == Containment::InsideInner)
        .ok_or_else(|| Error::invalid("input is not inside the inner approximation of an identified mode"))?;
    let bound = mode
        .pairs
        .iter()
        .zip(&mode.residuals)
        .map(|(p, &eps)| eps + l_p * (&p.input - u).norm())
        .fold(None, |acc: Option<T>, b| Some(acc.map_or(b, |a| a.min(b))));
    bound.ok_or_else(|| Error::invalid("mode has no pairs"))
}
