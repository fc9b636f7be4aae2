//! Simulate, identify after every sample, and track convergence.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use cdmid::geometry::{ProbeRegion, ProbeSet};
use cdmid::identification::{
    build_from_pairs, recover_pairs, write_reconstruction, write_sample_log, CdmReconstruction,
    ControlSample,
};
use cdmid::simulation::integrate;
use cdmid::Error;
use nalgebra::DVector;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, CliResult};

/// One row of the convergence table, written after each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub time: f64,
    pub sample: usize,
    pub modes_identified: usize,
    /// Probe estimate of the Hausdorff distance between each tracked region
    /// and the part of it certified by the reconstruction.
    pub hausdorff: Vec<f64>,
    /// Probe estimate of the covering radius of each region by the inputs
    /// observed inside it.
    pub covering: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub samples: Vec<ControlSample<f64>>,
    pub reconstruction: CdmReconstruction<f64>,
    pub region_names: Vec<String>,
    pub records: Vec<ConvergenceRecord>,
    /// Samples after which the rebuild failed and the previous
    /// reconstruction was kept.
    pub held_rebuilds: Vec<usize>,
}

pub fn simulate(exp: &Experiment) -> CliResult<Vec<ControlSample<f64>>> {
    let signal = |t: f64| exp.signal.eval(t);
    Ok(integrate(exp.system.as_ref(), exp.cdm.as_ref(), &exp.x0, &signal, &exp.schedule, &exp.options)?)
}

/// Runs the whole experiment in memory.
pub fn run_experiment(exp: &Experiment) -> CliResult<ExperimentOutcome> {
    let samples = simulate(exp)?;
    if samples.is_empty() {
        return Err(CliError::Config("the sampling horizon yields no samples".into()));
    }
    let full_dim = exp.system.input_dim();
    let pairs = recover_pairs(&samples, exp.system.as_ref(), exp.identification.channels.as_deref())?;

    let probes = exp
        .tracked
        .iter()
        .enumerate()
        .map(|(i, t)| ProbeSet::sample(&t.region, exp.probe_count, exp.probe_seed.wrapping_add(i as u64)))
        .collect::<cdmid::Result<Vec<_>>>()?;
    let diameters: Vec<f64> = exp
        .tracked
        .iter()
        .map(|t| t.region.diameter().expect("tracked regions are bounded"))
        .collect();
    let mut observed: Vec<Vec<DVector<f64>>> = vec![Vec::new(); exp.tracked.len()];

    let mut current: Option<CdmReconstruction<f64>> = None;
    let mut last_error: Option<Error> = None;
    let mut held = Vec::new();
    let mut records = Vec::with_capacity(samples.len());
    for k in 1..=pairs.len() {
        match build_from_pairs(&pairs[..k], full_dim, &exp.identification) {
            Ok(r) => {
                current = Some(r);
                last_error = None;
            }
            Err(e @ Error::IdentificationFailure(_)) => {
                log::warn!("rebuild after sample {k} failed, keeping the previous reconstruction: {e}");
                held.push(k);
                last_error = Some(e);
            }
            Err(e) => return Err(e.into()),
        }

        let u = &pairs[k - 1].input;
        for (t, seen) in exp.tracked.iter().zip(observed.iter_mut()) {
            if ProbeRegion::contains(&t.region, u) {
                seen.push(u.clone());
            }
        }
        let mut hausdorff = Vec::with_capacity(probes.len());
        let mut covering = Vec::with_capacity(probes.len());
        for ((p, seen), &diam) in probes.iter().zip(&observed).zip(&diameters) {
            covering.push(p.max_gap(seen.iter()).unwrap_or(diam));
            let certified: Vec<&DVector<f64>> = match &current {
                Some(r) => p.points().iter().filter(|q| r.inner_covers(q)).chain(seen.iter()).collect(),
                None => seen.iter().collect(),
            };
            hausdorff.push(p.max_gap(certified.iter().copied()).unwrap_or(diam));
        }
        records.push(ConvergenceRecord {
            time: samples[k - 1].time,
            sample: k,
            modes_identified: current.as_ref().map_or(0, |r| r.identified_count()),
            hausdorff,
            covering,
        });
    }

    if let Some(e) = last_error {
        return Err(e.into());
    }
    Ok(ExperimentOutcome {
        samples,
        reconstruction: current.expect("at least one successful rebuild"),
        region_names: exp.tracked.iter().map(|t| t.name.clone()).collect(),
        records,
        held_rebuilds: held,
    })
}

pub fn convergence_csv(names: &[String], records: &[ConvergenceRecord]) -> String {
    let mut out = String::from("time,sample,modes_identified");
    for prefix in ["h", "eps"] {
        for n in names {
            let _ = write!(out, ",{prefix}_{n}");
        }
    }
    out.push('\n');
    for r in records {
        let _ = write!(out, "{},{},{}", r.time, r.sample, r.modes_identified);
        for x in r.hausdorff.iter().chain(&r.covering) {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
    }
    out
}

/// Paths of the three artifacts written by [`run_config`].
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub samples: PathBuf,
    pub reconstruction: PathBuf,
    pub convergence: PathBuf,
}

pub fn write_artifacts(exp: &Experiment, outcome: &ExperimentOutcome, dir: &Path) -> CliResult<Artifacts> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let artifacts = Artifacts {
        samples: dir.join(&exp.output.samples),
        reconstruction: dir.join(&exp.output.reconstruction),
        convergence: dir.join(&exp.output.convergence),
    };
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    };
    write(&artifacts.samples, write_sample_log(&outcome.samples)?)?;
    write(&artifacts.reconstruction, write_reconstruction(&outcome.reconstruction))?;
    write(&artifacts.convergence, convergence_csv(&outcome.region_names, &outcome.records))?;
    Ok(artifacts)
}

/// Loads a configuration, runs it and writes the artifacts. The output
/// directory is resolved against the configuration file's directory unless
/// `out_dir` overrides it.
pub fn run_config(path: &Path, out_dir: Option<&Path>) -> CliResult<(ExperimentOutcome, Artifacts)> {
    let exp = ExperimentConfig::load(path)?.build()?;
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None if exp.output.directory.is_absolute() => exp.output.directory.clone(),
        None => path.parent().unwrap_or(Path::new(".")).join(&exp.output.directory),
    };
    let outcome = run_experiment(&exp)?;
    let artifacts = write_artifacts(&exp, &outcome, &dir)?;
    Ok((outcome, artifacts))
}
