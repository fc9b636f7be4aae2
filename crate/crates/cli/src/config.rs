//! TOML experiment configuration.
//!
//! ```toml
//! [system]
//! kind = "heat"              # or "linear" with `a`, `b`, `x0`
//! [cdm]
//! kind = "heat_example"      # or "identity", or "modes" with [[cdm.modes]]
//! [signal]
//! channels = [{ kind = "constant", value = 1.0 }, ...]
//! [sampling]
//! rate = 20.0
//! [identification]
//! delta = 0.4
//! n_modes = 3
//! [tracking]
//! [output]
//! directory = "out"
//! ```

use std::ops::Bound;
use std::path::{Path, PathBuf};

use cdmid::degradation::{AffineMap, AxisBox, Cdm, CdmMode, IdentityCdm, NModeCdm, Region};
use cdmid::identification::IdentificationConfig;
use cdmid::simulation::{
    ChannelSignal, ControlAffine, DepthCoupling, HeatSystem, InputSignal, IntegrationOptions,
    SamplingSchedule, SystemModel, VelocityObservation,
};
use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub cdm: CdmConfig,
    pub signal: SignalConfig,
    pub sampling: SamplingConfig,
    pub identification: IdentificationSection,
    #[serde(default)]
    pub tracking: TrackingConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    Heat {
        #[serde(default = "default_diffusivity")]
        diffusivity: f64,
        #[serde(default = "default_grid_points")]
        grid_points: usize,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default)]
        depth_coupling: CouplingConfig,
        #[serde(default)]
        initial_temperature: f64,
        #[serde(default)]
        initial_depth: f64,
    },
    Linear {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        x0: Vec<f64>,
    },
}

fn default_diffusivity() -> f64 {
    0.1
}
fn default_grid_points() -> usize {
    101
}
fn default_epsilon() -> f64 {
    0.05
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CouplingConfig {
    #[default]
    Linear,
    SurfaceTemperature,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CdmConfig {
    Identity,
    HeatExample,
    Modes {
        #[serde(default)]
        separation: f64,
        modes: Vec<ModeConfig>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub region: BoxConfig,
    pub linear: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

/// Axis-aligned box; `inf`/`-inf` leave an axis unbounded.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default)]
    pub lower_open: Vec<bool>,
    #[serde(default)]
    pub upper_open: Vec<bool>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    pub channels: Vec<ChannelConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelConfig {
    Constant {
        value: f64,
    },
    Cosine {
        offset: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    pub rate: f64,
    #[serde(default)]
    pub jitter: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub max_step: Option<f64>,
    #[serde(default)]
    pub velocity: VelocityConfig,
}

fn default_horizon() -> f64 {
    10.0
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum VelocityConfig {
    #[default]
    Exact,
    FiniteDifference,
}

/// A single number or one number per mode.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PerMode {
    One(f64),
    Many(Vec<f64>),
}

impl PerMode {
    fn to_vec(&self) -> Vec<f64> {
        match self {
            PerMode::One(x) => vec![*x],
            PerMode::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentificationSection {
    pub delta: f64,
    pub n_modes: usize,
    pub lipschitz_inner: PerMode,
    pub lipschitz_outer: PerMode,
    #[serde(default)]
    pub lipschitz_unaffected: Option<f64>,
    #[serde(default)]
    pub identity_tol: Option<f64>,
    #[serde(default)]
    pub merge_tol: Option<f64>,
    /// Relative residual above which identification fails; negative disables.
    #[serde(default)]
    pub max_residual: Option<f64>,
    #[serde(default)]
    pub channels: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackingConfig {
    /// Regions to track; the ground-truth regions of the CDM when omitted.
    #[serde(default)]
    pub regions: Option<Vec<BoxConfig>>,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
    #[serde(default = "default_probe_seed")]
    pub seed: u64,
}

impl Default for TrackingConfig {
    fn default() -> Self {
        Self { regions: None, probe_count: default_probe_count(), seed: default_probe_seed() }
    }
}

fn default_probe_count() -> usize {
    500
}
fn default_probe_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_samples")]
    pub samples: String,
    #[serde(default = "default_reconstruction")]
    pub reconstruction: String,
    #[serde(default = "default_convergence")]
    pub convergence: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            samples: default_samples(),
            reconstruction: default_reconstruction(),
            convergence: default_convergence(),
        }
    }
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}
fn default_samples() -> String {
    "samples.csv".into()
}
fn default_reconstruction() -> String {
    "reconstruction.txt".into()
}
fn default_convergence() -> String {
    "convergence.csv".into()
}

/// A named region tracked in the convergence table.
#[derive(Debug, Clone)]
pub struct TrackedRegion {
    pub name: String,
    pub region: AxisBox<f64>,
}

/// Everything a run needs, built and cross-checked from the configuration.
pub struct Experiment {
    pub system: Box<dyn ControlAffine<f64>>,
    pub cdm: Box<dyn Cdm<f64>>,
    pub x0: DVector<f64>,
    pub signal: InputSignal<f64>,
    pub schedule: SamplingSchedule<f64>,
    pub options: IntegrationOptions<f64>,
    pub identification: IdentificationConfig<f64>,
    pub tracked: Vec<TrackedRegion>,
    pub probe_count: usize,
    pub probe_seed: u64,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration: {}", e.message())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Validates the configuration and assembles the experiment.
    pub fn build(&self) -> CliResult<Experiment> {
        let (system, x0): (Box<dyn ControlAffine<f64>>, DVector<f64>) = match &self.system {
            SystemConfig::Heat { diffusivity, grid_points, epsilon, depth_coupling, initial_temperature, initial_depth } => {
                let coupling = match depth_coupling {
                    CouplingConfig::Linear => DepthCoupling::Linear,
                    CouplingConfig::SurfaceTemperature => DepthCoupling::SurfaceTemperature,
                };
                let sys = HeatSystem::new(*diffusivity, *grid_points, *epsilon)?.with_coupling(coupling);
                let x0 = sys.initial_state(*initial_temperature, *initial_depth);
                (Box::new(sys), x0)
            }
            SystemConfig::Linear { a, b, x0 } => {
                let a = matrix(a, "system.a")?;
                let b = matrix(b, "system.b")?;
                if x0.len() != a.nrows() {
                    return Err(CliError::Config(format!(
                        "system.x0 has {} entries but the state dimension is {}",
                        x0.len(),
                        a.nrows()
                    )));
                }
                (Box::new(SystemModel::linear(a, b)?), DVector::from_vec(x0.clone()))
            }
        };
        let m = system.input_dim();

        let (cdm, truth_regions): (Box<dyn Cdm<f64>>, Vec<TrackedRegion>) = match &self.cdm {
            CdmConfig::Identity => (Box::new(IdentityCdm { dim: m }), Vec::new()),
            CdmConfig::HeatExample => {
                if m != 2 {
                    return Err(CliError::Config("the heat_example CDM needs a two-input system".into()));
                }
                let cdm = cdmid::degradation::heat_example_cdm::<f64>();
                let names = ["charred", "pristine", "vascular"];
                let regions = cdm
                    .formula_regions()
                    .into_iter()
                    .zip(names)
                    .map(|(region, name)| TrackedRegion { name: name.into(), region: embed_depth(region) })
                    .collect();
                (Box::new(cdm), regions)
            }
            CdmConfig::Modes { separation, modes } => {
                let mut built = Vec::with_capacity(modes.len());
                let mut regions = Vec::with_capacity(modes.len());
                for (i, mc) in modes.iter().enumerate() {
                    let region = axis_box(&mc.region, &format!("cdm.modes[{i}].region"))?;
                    let map = AffineMap::new(matrix(&mc.linear, "cdm.modes.linear")?, DVector::from_vec(mc.translation.clone()))?;
                    if map.dim() != m || region.dim() != m {
                        return Err(CliError::Config(format!("cdm.modes[{i}] must have dimension {m}")));
                    }
                    regions.push(TrackedRegion {
                        name: mc.region.name.clone().unwrap_or_else(|| format!("mode{i}")),
                        region: region.clone(),
                    });
                    built.push(CdmMode { region: Region::Box(region), map });
                }
                (Box::new(NModeCdm::new(m, built, *separation)?), regions)
            }
        };

        if self.signal.channels.len() != m {
            return Err(CliError::Config(format!(
                "signal has {} channels but the system has {m} inputs",
                self.signal.channels.len()
            )));
        }
        let signal = InputSignal::new(
            self.signal
                .channels
                .iter()
                .map(|c| match *c {
                    ChannelConfig::Constant { value } => Ok(ChannelSignal::Constant(value)),
                    ChannelConfig::Cosine { offset, amplitude, period, phase } => {
                        if period.is_nan() || period <= 0.0 {
                            return Err(CliError::Config("cosine period must be positive".into()));
                        }
                        Ok(ChannelSignal::Cosine { offset, amplitude, period, phase })
                    }
                })
                .collect::<CliResult<Vec<_>>>()?,
        );

        let s = &self.sampling;
        let schedule = SamplingSchedule::new(s.rate, s.jitter, s.seed, s.horizon)?;
        let options = IntegrationOptions {
            max_step: s.max_step,
            velocity: match s.velocity {
                VelocityConfig::Exact => VelocityObservation::Exact,
                VelocityConfig::FiniteDifference => VelocityObservation::FiniteDifference,
            },
        };
        if let (Some(step), Some(limit)) = (s.max_step, system.stable_step()) {
            if step > limit {
                return Err(CliError::Config(format!(
                    "sampling.max_step {step} exceeds the stability limit {limit}"
                )));
            }
        }

        let id = &self.identification;
        let mut identification = IdentificationConfig::new(id.delta, id.n_modes, 0.0);
        identification.lipschitz_inner = id.lipschitz_inner.to_vec();
        identification.lipschitz_outer = id.lipschitz_outer.to_vec();
        identification.lipschitz_unaffected = id
            .lipschitz_unaffected
            .unwrap_or_else(|| identification.lipschitz_inner[0]);
        if let Some(t) = id.identity_tol {
            identification.identity_tol = t;
        }
        if let Some(t) = id.merge_tol {
            identification.merge_tol = t;
        }
        if let Some(t) = id.max_residual {
            identification.max_residual = (t >= 0.0).then_some(t);
        }
        identification.channels = id.channels.clone();
        identification.validate()?;
        let channels: Vec<usize> = id.channels.clone().unwrap_or_else(|| (0..m).collect());
        if let Some(&c) = channels.iter().find(|&&c| c >= m) {
            return Err(CliError::Config(format!("identification channel {c} exceeds the input dimension {m}")));
        }

        let tracked = match &self.tracking.regions {
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    Ok(TrackedRegion {
                        name: b.name.clone().unwrap_or_else(|| format!("region{i}")),
                        region: axis_box(b, &format!("tracking.regions[{i}]"))?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?,
            None => truth_regions
                .into_iter()
                .map(|t| Ok(TrackedRegion { name: t.name, region: project_box(&t.region, &channels)? }))
                .collect::<CliResult<Vec<_>>>()?,
        };
        for t in &tracked {
            if t.region.dim() != channels.len() {
                return Err(CliError::Config(format!(
                    "tracked region {} has dimension {} but {} channels are identified",
                    t.name,
                    t.region.dim(),
                    channels.len()
                )));
            }
            if !t.region.is_bounded() {
                return Err(CliError::Config(format!(
                    "tracked region {} is unbounded; list bounded regions under [tracking]",
                    t.name
                )));
            }
            if !t.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::Config(format!("region name {:?} must be alphanumeric", t.name)));
            }
        }
        if self.tracking.probe_count == 0 {
            return Err(CliError::Config("tracking.probe_count must be positive".into()));
        }

        Ok(Experiment {
            system,
            cdm,
            x0,
            signal,
            schedule,
            options,
            identification,
            tracked,
            probe_count: self.tracking.probe_count,
            probe_seed: self.tracking.seed,
            output: self.output.clone(),
        })
    }
}

fn matrix(rows: &[Vec<f64>], what: &str) -> CliResult<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Config(format!("{what} must be a non-empty rectangular matrix")));
    }
    Ok(DMatrix::from_fn(n, m, |r, c| rows[r][c]))
}

fn axis_box(cfg: &BoxConfig, what: &str) -> CliResult<AxisBox<f64>> {
    let d = cfg.lower.len();
    let flags_ok = |f: &[bool]| f.is_empty() || f.len() == d;
    if cfg.upper.len() != d || d == 0 || !flags_ok(&cfg.lower_open) || !flags_ok(&cfg.upper_open) {
        return Err(CliError::Config(format!("{what}: bounds and open flags must have equal lengths")));
    }
    let bound = |x: f64, open: bool| {
        if x.is_infinite() {
            Bound::Unbounded
        } else if open {
            Bound::Excluded(x)
        } else {
            Bound::Included(x)
        }
    };
    let axes = (0..d)
        .map(|k| {
            (
                bound(cfg.lower[k], cfg.lower_open.get(k).copied().unwrap_or(false)),
                bound(cfg.upper[k], cfg.upper_open.get(k).copied().unwrap_or(false)),
            )
        })
        .collect();
    AxisBox::new(axes).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

/// Full-input box with the depth axis given and the power axis unbounded.
fn embed_depth(depth: AxisBox<f64>) -> AxisBox<f64> {
    let mut axes = vec![(Bound::Unbounded, Bound::Unbounded)];
    axes.extend(depth.axes().iter().cloned());
    AxisBox::new(axes).expect("unbounded axes are ordered")
}

fn project_box(b: &AxisBox<f64>, channels: &[usize]) -> CliResult<AxisBox<f64>> {
    let axes = channels
        .iter()
        .map(|&c| {
            b.axes()
                .get(c)
                .cloned()
                .ok_or_else(|| CliError::Config(format!("channel {c} out of range")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    AxisBox::new(axes).map_err(|e| CliError::Config(e.to_string()))
}
