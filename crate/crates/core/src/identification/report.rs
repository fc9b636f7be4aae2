//! Sectioned plain-text persistence for [`CdmReconstruction`].
//!
//! ```text
//! [reconstruction]
//! input_dim=1
//! full_dim=2
//! channels=1
//! separation=0.4
//! mode_count=3
//! modes=1
//! unaffected=2
//! [mode 0]
//! identified=true
//! residual=0
//! linear=3
//! translation=0.25
//! [mode 0 inner]
//! <star set>
//! [mode 0 outer]
//! <star set>
//! [mode 0 pairs]
//! u..,v..,residual
//! [unaffected]
//! u..,v..
//! [unaffected inner]
//! <star set>
//! [unaffected outer]
//! <star set>
//! [end]
//! ```
//!
//! Matrices are written row by row with `;` between rows. The unaffected
//! approximation sections are present only when unaffected pairs exist, and
//! pair rows of an unidentified mode carry no residual column.

use std::collections::HashMap;
use std::fmt::Write;

use nalgebra::{DMatrix, DVector};

use super::reconstruction::{CdmReconstruction, ModeReconstruction};
use super::sample::EffectivePair;
use crate::degradation::AffineMap;
use crate::error::{Error, Result};
use crate::geometry::{fmt_scalar, parse_scalar, parse_star_set, write_star_set, StarSetApprox};
use crate::scalar::Real;

fn join<T: Real>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(fmt_scalar).collect::<Vec<_>>().join(",")
}

pub fn write_reconstruction<T: Real>(recon: &CdmReconstruction<T>) -> String {
    let mut out = String::new();
    let channels: Vec<String> = recon.channels.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "[reconstruction]");
    let _ = writeln!(out, "input_dim={}", recon.input_dim);
    let _ = writeln!(out, "full_dim={}", recon.full_dim);
    let _ = writeln!(out, "channels={}", channels.join(","));
    let _ = writeln!(out, "separation={}", fmt_scalar(recon.separation));
    let _ = writeln!(out, "mode_count={}", recon.mode_count);
    let _ = writeln!(out, "modes={}", recon.modes.len());
    let _ = writeln!(out, "unaffected={}", recon.unaffected.len());
    for (i, mode) in recon.modes.iter().enumerate() {
        let _ = writeln!(out, "[mode {i}]");
        let _ = writeln!(out, "identified={}", mode.is_identified());
        let _ = writeln!(out, "residual={}", fmt_scalar(mode.residual));
        if let Some(map) = &mode.map {
            let rows: Vec<String> = map.linear().row_iter().map(|r| join(r.iter().copied())).collect();
            let _ = writeln!(out, "linear={}", rows.join(";"));
            let _ = writeln!(out, "translation={}", join(map.translation().iter().copied()));
        }
        let _ = writeln!(out, "[mode {i} inner]");
        out.push_str(&write_star_set(&mode.inner));
        let _ = writeln!(out, "[mode {i} outer]");
        out.push_str(&write_star_set(&mode.outer));
        let _ = writeln!(out, "[mode {i} pairs]");
        for (j, p) in mode.pairs.iter().enumerate() {
            let mut row = join(p.input.iter().chain(p.effective.iter()).copied());
            if let Some(eps) = mode.residuals.get(j) {
                row.push(',');
                row.push_str(&fmt_scalar(*eps));
            }
            let _ = writeln!(out, "{row}");
        }
    }
    let _ = writeln!(out, "[unaffected]");
    for p in &recon.unaffected {
        let _ = writeln!(out, "{}", join(p.input.iter().chain(p.effective.iter()).copied()));
    }
    if let Some((inner, outer)) = &recon.unaffected_region {
        let _ = writeln!(out, "[unaffected inner]");
        out.push_str(&write_star_set(inner));
        let _ = writeln!(out, "[unaffected outer]");
        out.push_str(&write_star_set(outer));
    }
    let _ = writeln!(out, "[end]");
    out
}

struct Section<'a> {
    name: String,
    header_line: usize,
    /// `(line number, text)` of each non-empty body line.
    body: Vec<(usize, &'a str)>,
}

fn split_sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut sections: Vec<Section<'_>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push(Section { name: name.trim().to_string(), header_line: lineno, body: Vec::new() });
        } else {
            match sections.last_mut() {
                Some(s) => s.body.push((lineno, line)),
                None => return Err(Error::parse(lineno, "content before the first section")),
            }
        }
    }
    Ok(sections)
}

struct Cursor<'a> {
    sections: Vec<Section<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn peek_is(&self, name: &str) -> bool {
        self.sections.get(self.pos).is_some_and(|s| s.name == name)
    }

    fn expect(&mut self, name: &str) -> Result<&Section<'a>> {
        match self.sections.get(self.pos) {
            Some(s) if s.name == name => {
                self.pos += 1;
                Ok(&self.sections[self.pos - 1])
            }
            Some(s) => Err(Error::parse(s.header_line, format!("expected section [{name}], found [{}]", s.name))),
            None => Err(Error::parse(self.last_line + 1, format!("missing section [{name}]"))),
        }
    }
}

fn key_values<'a>(section: &Section<'a>) -> Result<HashMap<&'a str, (usize, &'a str)>> {
    let mut map = HashMap::new();
    for &(line, text) in &section.body {
        let (k, v) = text
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected key=value, found {text:?}")))?;
        map.insert(k.trim(), (line, v.trim()));
    }
    Ok(map)
}

fn get<'a>(kv: &HashMap<&str, (usize, &'a str)>, key: &str, section: &Section<'_>) -> Result<(usize, &'a str)> {
    kv.get(key)
        .copied()
        .ok_or_else(|| Error::parse(section.header_line, format!("[{}] lacks `{key}`", section.name)))
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::parse(line, format!("invalid count {s:?}")))
}

fn parse_row<T: Real>(s: &str, line: usize) -> Result<Vec<T>> {
    s.split(',').map(|f| parse_scalar(f, line)).collect()
}

fn parse_star<T: Real>(section: &Section<'_>) -> Result<StarSetApprox<T>> {
    let lines: Vec<&str> = section.body.iter().map(|(_, l)| *l).collect();
    let first = section.body.first().map_or(section.header_line + 1, |(n, _)| *n);
    parse_star_set(&lines, first)
}

fn parse_pairs<T: Real>(section: &Section<'_>, m: usize, with_residual: bool) -> Result<(Vec<EffectivePair<T>>, Vec<T>)> {
    let width = 2 * m + usize::from(with_residual);
    let mut pairs = Vec::with_capacity(section.body.len());
    let mut residuals = Vec::new();
    for &(line, text) in &section.body {
        let row: Vec<T> = parse_row(text, line)?;
        if row.len() != width {
            return Err(Error::parse(line, format!("expected {width} fields, found {}", row.len())));
        }
        pairs.push(EffectivePair {
            input: DVector::from_column_slice(&row[..m]),
            effective: DVector::from_column_slice(&row[m..2 * m]),
        });
        if with_residual {
            residuals.push(row[2 * m]);
        }
    }
    Ok((pairs, residuals))
}

pub fn parse_reconstruction<T: Real>(text: &str) -> Result<CdmReconstruction<T>> {
    let last_line = text.lines().count();
    let mut cur = Cursor { sections: split_sections(text)?, pos: 0, last_line };

    let head = cur.expect("reconstruction")?;
    let kv = key_values(head)?;
    let (l, v) = get(&kv, "input_dim", head)?;
    let input_dim = parse_usize(v, l)?;
    let (l, v) = get(&kv, "full_dim", head)?;
    let full_dim = parse_usize(v, l)?;
    let (l, v) = get(&kv, "channels", head)?;
    let channels = v.split(',').map(|c| parse_usize(c.trim(), l)).collect::<Result<Vec<_>>>()?;
    if channels.len() != input_dim || channels.iter().any(|&c| c >= full_dim) {
        return Err(Error::parse(l, "channels do not match the dimensions"));
    }
    let (l, v) = get(&kv, "separation", head)?;
    let separation: T = parse_scalar(v, l)?;
    let (l, v) = get(&kv, "mode_count", head)?;
    let mode_count = parse_usize(v, l)?;
    let (l, v) = get(&kv, "modes", head)?;
    let n_modes = parse_usize(v, l)?;
    let (l, v) = get(&kv, "unaffected", head)?;
    let n_unaffected = parse_usize(v, l)?;
    let head_line = head.header_line;
    if input_dim == 0 {
        return Err(Error::parse(head_line, "input dimension must be positive"));
    }

    let mut modes = Vec::with_capacity(n_modes);
    for i in 0..n_modes {
        let sec = cur.expect(&format!("mode {i}"))?;
        let kv = key_values(sec)?;
        let (l, v) = get(&kv, "identified", sec)?;
        let identified = match v {
            "true" => true,
            "false" => false,
            _ => return Err(Error::parse(l, format!("invalid flag {v:?}"))),
        };
        let (l, v) = get(&kv, "residual", sec)?;
        let residual: T = parse_scalar(v, l)?;
        let map = if identified {
            let (l, v) = get(&kv, "linear", sec)?;
            let rows = v.split(';').map(|r| parse_row::<T>(r, l)).collect::<Result<Vec<_>>>()?;
            if rows.len() != input_dim || rows.iter().any(|r| r.len() != input_dim) {
                return Err(Error::parse(l, format!("linear part must be {input_dim}x{input_dim}")));
            }
            let linear = DMatrix::from_fn(input_dim, input_dim, |r, c| rows[r][c]);
            let (l2, v) = get(&kv, "translation", sec)?;
            let t = parse_row::<T>(v, l2)?;
            Some(AffineMap::new(linear, DVector::from_vec(t)).map_err(|e| Error::parse(l2, e.to_string()))?)
        } else {
            None
        };
        let inner = parse_star(cur.expect(&format!("mode {i} inner"))?)?;
        let outer = parse_star(cur.expect(&format!("mode {i} outer"))?)?;
        let (pairs, residuals) = parse_pairs(cur.expect(&format!("mode {i} pairs"))?, input_dim, identified)?;
        modes.push(ModeReconstruction { map, inner, outer, residual, pairs, residuals });
    }

    let sec = cur.expect("unaffected")?;
    let (unaffected, _) = parse_pairs(sec, input_dim, false)?;
    if unaffected.len() != n_unaffected {
        return Err(Error::parse(
            sec.header_line,
            format!("expected {n_unaffected} unaffected pairs, found {}", unaffected.len()),
        ));
    }
    let unaffected_region = if cur.peek_is("unaffected inner") {
        let inner = parse_star(cur.expect("unaffected inner")?)?;
        let outer = parse_star(cur.expect("unaffected outer")?)?;
        Some((inner, outer))
    } else {
        None
    };
    let end = cur.expect("end")?;
    if let Some(&(line, _)) = end.body.first() {
        return Err(Error::parse(line, "content after [end]"));
    }
    if let Some(extra) = cur.sections.get(cur.pos) {
        return Err(Error::parse(extra.header_line, "section after [end]"));
    }
    Ok(CdmReconstruction {
        input_dim,
        full_dim,
        channels,
        separation,
        mode_count,
        modes,
        unaffected,
        unaffected_region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identification::{build_from_pairs, IdentificationConfig};

    fn sample_recon() -> CdmReconstruction<f64> {
        let pairs: Vec<_> = [0.05, 0.5, 0.2, 0.9, 0.1, 0.6, 0.95, 0.8]
            .iter()
            .map(|&u: &f64| {
                let v = if u < 0.25 { 0.25 + 3.0 * u } else if u > 0.75 { 2.5 - 2.0 * u } else { u };
                EffectivePair::new(DVector::from_element(1, u), DVector::from_element(1, v)).unwrap()
            })
            .collect();
        build_from_pairs(&pairs, 1, &IdentificationConfig::new(0.1, 3, 10.0)).unwrap()
    }

    #[test]
    fn round_trip() {
        let r = sample_recon();
        assert_eq!(r.modes.len(), 2);
        let text = write_reconstruction(&r);
        assert_eq!(parse_reconstruction::<f64>(&text).unwrap(), r);
    }

    #[test]
    fn truncation_names_missing_section() {
        let text = write_reconstruction(&sample_recon());
        let cut: String = text.lines().take_while(|l| *l != "[mode 1 outer]").map(|l| format!("{l}\n")).collect();
        match parse_reconstruction::<f64>(&cut) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("[mode 1 outer]"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_number_reports_line() {
        let text = write_reconstruction(&sample_recon()).replacen("separation=0.1", "separation=abc", 1);
        assert!(matches!(parse_reconstruction::<f64>(&text), Err(Error::Parse { line: 5, .. })));
    }
}
