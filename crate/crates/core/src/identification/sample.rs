//! Observations and the comma-separated sample log.
//!
//! The log starts with a header `time,x0..x{n-1},dx0..dx{n-1},u0..u{m-1}`
//! from which the state and input dimensions are read back.

use std::fmt::Write;

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{fmt_scalar, parse_scalar};
use crate::scalar::Real;

/// One observation of the degraded system.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSample<T: Real> {
    pub time: T,
    pub state: DVector<T>,
    pub velocity: DVector<T>,
    pub input: DVector<T>,
}

impl<T: Real> ControlSample<T> {
    pub fn new(time: T, state: DVector<T>, velocity: DVector<T>, input: DVector<T>) -> Result<Self> {
        check_dim(state.len(), velocity.len())?;
        if !time.is_finite() {
            return Err(Error::invalid("sample time must be finite"));
        }
        Ok(Self { time, state, velocity, input })
    }
}

/// A commanded input `u` together with the effective input `v = P u`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePair<T: Real> {
    pub input: DVector<T>,
    pub effective: DVector<T>,
}

impl<T: Real> EffectivePair<T> {
    pub fn new(input: DVector<T>, effective: DVector<T>) -> Result<Self> {
        check_dim(input.len(), effective.len())?;
        Ok(Self { input, effective })
    }

    pub fn dim(&self) -> usize {
        self.input.len()
    }

    /// The point `(u, v)` on the graph of the map.
    pub fn graph_point(&self) -> DVector<T> {
        let m = self.dim();
        DVector::from_fn(2 * m, |i, _| if i < m { self.input[i] } else { self.effective[i - m] })
    }

    /// Keeps only the listed channels of both vectors.
    pub fn project(&self, channels: &[usize]) -> Result<Self> {
        let pick = |x: &DVector<T>| -> Result<DVector<T>> {
            channels
                .iter()
                .map(|&c| {
                    x.get(c)
                        .copied()
                        .ok_or_else(|| Error::invalid(format!("channel {c} out of range")))
                })
                .collect::<Result<Vec<_>>>()
                .map(DVector::from_vec)
        };
        Ok(Self { input: pick(&self.input)?, effective: pick(&self.effective)? })
    }
}

pub fn write_sample_log<T: Real>(samples: &[ControlSample<T>]) -> Result<String> {
    let first = samples
        .first()
        .ok_or_else(|| Error::invalid("cannot write an empty sample log"))?;
    let (n, m) = (first.state.len(), first.input.len());
    let mut out = String::from("time");
    for prefix in ["x", "dx"] {
        for i in 0..n {
            let _ = write!(out, ",{prefix}{i}");
        }
    }
    for i in 0..m {
        let _ = write!(out, ",u{i}");
    }
    out.push('\n');
    for s in samples {
        check_dim(n, s.state.len())?;
        check_dim(n, s.velocity.len())?;
        check_dim(m, s.input.len())?;
        out.push_str(&fmt_scalar(s.time));
        for x in s.state.iter().chain(s.velocity.iter()).chain(s.input.iter()) {
            out.push(',');
            out.push_str(&fmt_scalar(*x));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_sample_log<T: Real>(text: &str) -> Result<Vec<ControlSample<T>>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty sample log"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"time") {
        return Err(Error::parse(1, "header must start with `time`"));
    }
    let n = cols.iter().filter(|c| c.starts_with('x')).count();
    let dn = cols.iter().filter(|c| c.starts_with("dx")).count();
    let m = cols.iter().filter(|c| c.starts_with('u')).count();
    if n != dn || n == 0 || m == 0 || cols.len() != 1 + 2 * n + m {
        return Err(Error::parse(1, "header must list time, x0.., dx0.., u0.."));
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let values = line
            .split(',')
            .map(|f| parse_scalar::<T>(f, lineno))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != cols.len() {
            return Err(Error::parse(
                lineno,
                format!("expected {} fields, found {}", cols.len(), values.len()),
            ));
        }
        let slice = |a: usize, b: usize| DVector::from_column_slice(&values[a..b]);
        samples.push(
            ControlSample::new(values[0], slice(1, 1 + n), slice(1 + n, 1 + 2 * n), slice(1 + 2 * n, 1 + 2 * n + m))
                .map_err(|e| Error::parse(lineno, e.to_string()))?,
        );
    }
    Ok(samples)
}
