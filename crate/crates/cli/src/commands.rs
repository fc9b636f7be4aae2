//! `report` and `viabilize` subcommands.

use std::fmt::Write;
use std::path::Path;

use cdmid::identification::{parse_reconstruction, viabilize_with, CdmReconstruction, ViabilizeStrategy};
use nalgebra::DVector;

use crate::error::{CliError, CliResult};

pub fn load_reconstruction(path: &Path) -> CliResult<CdmReconstruction<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_reconstruction(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn vec_str(v: impl IntoIterator<Item = f64>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Per-axis `[min, max]` of a list of points.
fn bounds<'a>(points: impl Iterator<Item = &'a DVector<f64>>) -> Option<String> {
    let mut lo: Option<DVector<f64>> = None;
    let mut hi: Option<DVector<f64>> = None;
    for p in points {
        lo = Some(lo.map_or_else(|| p.clone(), |l| l.inf(p)));
        hi = Some(hi.map_or_else(|| p.clone(), |h| h.sup(p)));
    }
    let (lo, hi) = (lo?, hi?);
    Some(
        lo.iter()
            .zip(hi.iter())
            .map(|(a, b)| format!("[{a}, {b}]"))
            .collect::<Vec<_>>()
            .join(" x "),
    )
}

/// Human-readable summary of a reconstruction.
pub fn summarize(r: &CdmReconstruction<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "reconstruction over {} of {} input channels (channels {}), separation {}, at most {} modes",
        r.input_dim,
        r.full_dim,
        r.channels.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        r.separation,
        r.mode_count
    );
    if r.modes.is_empty() {
        let _ = writeln!(out, "no degradation detected ({} unaffected samples)", r.unaffected.len());
        return out;
    }
    let _ = writeln!(out, "modes: {} detected, {} identified", r.modes.len(), r.identified_count());
    for (i, m) in r.modes.iter().enumerate() {
        let _ = writeln!(out, "mode {i}: {} samples", m.pairs.len());
        match &m.map {
            Some(map) => {
                for (k, row) in map.linear().row_iter().enumerate() {
                    let label = if k == 0 { "  linear:      " } else { "               " };
                    let _ = writeln!(out, "{label}[{}]", vec_str(row.iter().copied()));
                }
                let _ = writeln!(out, "  translation: [{}]", vec_str(map.translation().iter().copied()));
                let _ = writeln!(out, "  residual:    {:e}", m.residual);
            }
            None => {
                let _ = writeln!(out, "  detected but not yet identified");
            }
        }
        if let Some(b) = bounds(m.pairs.iter().map(|p| &p.input)) {
            let _ = writeln!(out, "  observed inputs:  {b}");
        }
        let outer = match m.outer.extent() {
            Some(e) => format!("within {e} of [{}]", vec_str(m.outer.center().iter().copied())),
            None => "unbounded".into(),
        };
        let _ = writeln!(out, "  outer bound:      {outer}");
        if m.map.is_some() {
            if let Some(b) = bounds(m.pairs.iter().map(|p| &p.effective)) {
                let _ = writeln!(out, "  viable commands:  {b}");
            }
        }
    }
    let unaffected = bounds(r.unaffected.iter().map(|p| &p.input)).unwrap_or_else(|| "none".into());
    let _ = writeln!(out, "unaffected: {} samples, inputs {unaffected}", r.unaffected.len());
    let _ = writeln!(out, "viability range: commands outside every outer bound pass through; mode ranges above");
    out
}

pub fn parse_vector(text: &str) -> CliResult<DVector<f64>> {
    let values = text
        .split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("invalid vector component {:?}", f.trim())))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if values.is_empty() {
        return Err(CliError::Parse("empty vector".into()));
    }
    Ok(DVector::from_vec(values))
}

/// Viabilizes a command given over the identified channels or over all of
/// them; the result has the same length as the command.
pub fn viabilize_command(
    recon: &CdmReconstruction<f64>,
    u_cmd: &DVector<f64>,
    strategy: ViabilizeStrategy,
) -> CliResult<DVector<f64>> {
    if u_cmd.len() == recon.input_dim {
        return Ok(viabilize_with(recon, u_cmd, strategy)?);
    }
    if u_cmd.len() == recon.full_dim {
        let part = recon.project(u_cmd)?;
        let solved = viabilize_with(recon, &part, strategy)?;
        return Ok(recon.embed(u_cmd, &solved)?);
    }
    Err(CliError::Parse(format!(
        "command has {} components; expected {} (identified channels) or {} (all inputs)",
        u_cmd.len(),
        recon.input_dim,
        recon.full_dim
    )))
}

pub fn format_vector(v: &DVector<f64>) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
